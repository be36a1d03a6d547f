import numpy as np
import pytest

from fairstream import CoverageGroundSet, CoverageOracle, FairnessSpec, RecGroundSet, RecommendationOracle

ACCEPTANCE_LINES = []


@pytest.fixture
def path_graph():
    """Undirected path 1-2-3-4, stored as dense ids 0..3 (id = label - 1)."""
    ground = CoverageGroundSet.from_edges(4, [(0, 1), (1, 2), (2, 3)], directed=False)
    return CoverageOracle(ground)


@pytest.fixture
def path_groups():
    # V_1 = {1, 2}, V_2 = {3, 4}
    return np.array([0, 0, 1, 1])


@pytest.fixture
def tiny_rec():
    ground = RecGroundSet(np.array([[2.0], [1.0]]), np.array([1.0]), lam=0.75)
    return RecommendationOracle(ground)


def random_coverage(rng, n, p=None):
    p = rng.uniform(0.1, 0.5) if p is None else p
    mask = rng.random((n, n)) < p
    edges = np.argwhere(mask)
    return CoverageOracle(CoverageGroundSet.from_edges(n, edges, directed=True))


def random_rec(rng, n, d=None):
    d = int(rng.integers(1, 6)) if d is None else d
    X = rng.random((n, d)) * (rng.random((n, d)) < 0.7)
    u = rng.random(d)
    return RecommendationOracle(RecGroundSet(X, u, lam=0.75))


def random_instance(rng, kind, n_max=16, l_max=3, k_max=5):
    """Random small FSM instance; budgets are feasible and sum to k >= 1."""
    n = int(rng.integers(4, n_max + 1))
    l = int(rng.integers(1, l_max + 1))
    groups = rng.integers(0, l, size=n)
    groups[:l] = np.arange(l)
    sizes = np.bincount(groups, minlength=l)
    k = int(rng.integers(1, min(k_max, n) + 1))
    budgets = np.zeros(l, dtype=int)
    for _ in range(k):
        open_ = np.flatnonzero(budgets < sizes)
        budgets[rng.choice(open_)] += 1
    oracle = random_coverage(rng, n) if kind == "coverage" else random_rec(rng, n)
    return oracle, groups, FairnessSpec(tuple(budgets.tolist()))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
