import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fairstream import CoverageGroundSet, CoverageOracle, RecGroundSet, RecommendationOracle
from fairstream.errors import DataFormatError, DuplicateItemError, InvalidItemError

from conftest import random_coverage, random_rec

# path graph labels 1..4 live at ids 0..3


def brute_coverage(oracle, items):
    covered = set()
    for v in items:
        covered |= set(oracle.ground.neighbors(v).tolist())
    return len(covered)


def test_coverage_gain_on_empty(path_graph):
    assert path_graph.marginal_gain(path_graph.new_state(), 1) == 2


def test_coverage_gain_after_commit(path_graph):
    o = path_graph
    s = o.new_state()
    o.commit(s, 1)  # covers {1, 3}
    assert o.marginal_gain(s, 3) == 0
    assert o.marginal_gain(s, 2) == 2


def test_coverage_commit_sequence(path_graph):
    o = path_graph
    s = o.new_state()
    assert o.commit(s, 1) == 2
    assert o.commit(s, 2) == 2
    assert s.value == 4 == o.evaluate([1, 2])


def test_coverage_singletons(path_graph):
    assert path_graph.singleton_value(0) == 1
    iso = CoverageOracle(CoverageGroundSet.from_edges(3, [(0, 1)]))
    assert iso.singleton_value(2) == 0


def test_directed_coverage_uses_out_neighbors():
    o = CoverageOracle(CoverageGroundSet.from_edges(3, [(0, 1), (1, 2)]))
    assert o.ground.neighbors(0).tolist() == [1]
    assert o.ground.neighbors(2).tolist() == []
    # no implicit self coverage; self loops count when present
    loop = CoverageOracle(CoverageGroundSet.from_edges(2, [(0, 0), (0, 1)]))
    assert loop.singleton_value(0) == 2


def test_rec_gain(tiny_rec):
    assert tiny_rec.marginal_gain(tiny_rec.new_state(), 0) == pytest.approx(5.0)
    assert tiny_rec.singleton_value(0) == pytest.approx(5.0)
    s = tiny_rec.new_state()
    tiny_rec.commit(s, 0)
    assert s.value == pytest.approx(5.0)
    assert tiny_rec.value_from_scratch([0]) == pytest.approx(5.0)


def test_rec_rejects_negative_features():
    with pytest.raises(DataFormatError):
        RecGroundSet(np.array([[1.0, -0.1]]), np.array([1.0, 1.0]))
    with pytest.raises(DataFormatError):
        RecGroundSet(np.array([[1.0, 0.1]]), np.array([1.0]))


def test_call_count(path_graph):
    o = path_graph
    assert o.call_count() == 0
    o.marginal_gain(o.new_state(), 0)
    assert o.call_count() == 1
    o.singleton_value(2)
    o.gains(o.new_state(), [0, 1, 2])
    assert o.call_count() == 5
    o.evaluate([0, 1])  # verification path is free
    assert o.call_count() == 5


def test_errors(path_graph):
    o = path_graph
    s = o.new_state()
    with pytest.raises(InvalidItemError):
        o.marginal_gain(s, 4)
    with pytest.raises(InvalidItemError):
        o.singleton_value(-1)
    with pytest.raises(InvalidItemError):
        o.gains(s, [0, 9])
    o.commit(s, 0)
    with pytest.raises(DuplicateItemError):
        o.commit(s, 0)


def test_marginal_gain_does_not_mutate(tiny_rec):
    s = tiny_rec.new_state()
    tiny_rec.commit(s, 1)
    before = (s.value, s.best.copy())
    tiny_rec.marginal_gain(s, 0)
    assert s.value == before[0]
    assert np.array_equal(s.best, before[1])


def test_empty_set_is_zero(path_graph, tiny_rec):
    assert path_graph.evaluate([]) == 0
    assert tiny_rec.evaluate([]) == 0


@pytest.mark.parametrize("kind", ["coverage", "rec"])
def test_batch_gains_match_scalar(kind):
    rng = np.random.default_rng(3)
    o = random_coverage(rng, 30) if kind == "coverage" else random_rec(rng, 30)
    s = o.new_state()
    for v in (3, 17, 8):
        o.commit(s, v)
    items = np.arange(30)
    batch = o.gains(s, items)
    single = [o.marginal_gain(s, int(v)) for v in items]
    assert np.allclose(batch, single, rtol=1e-12, atol=0)


def test_coverage_matches_brute_union():
    rng = np.random.default_rng(0)
    o = random_coverage(rng, 12)
    for r in range(5):
        for sub in itertools.combinations(range(12), r):
            assert o.evaluate(sub) == brute_coverage(o, sub)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), kind=st.sampled_from(["coverage", "rec"]),
       length=st.integers(0, 50))
def test_incremental_matches_scratch(seed, kind, length):
    rng = np.random.default_rng(seed)
    n = 60
    o = random_coverage(rng, n, p=0.05) if kind == "coverage" else random_rec(rng, n)
    seq = rng.permutation(n)[:length].tolist()
    s = o.new_state()
    for v in seq:
        g = o.marginal_gain(s, v)
        before = s.value
        o.commit(s, v)
        assert s.value - before == pytest.approx(g, rel=1e-12, abs=1e-12)
    scratch = o.value_from_scratch(seq)
    if kind == "coverage":
        assert s.value == scratch
    else:
        assert s.value == pytest.approx(scratch, rel=1e-9, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), kind=st.sampled_from(["coverage", "rec"]))
def test_diminishing_returns(seed, kind):
    rng = np.random.default_rng(seed)
    n = 14
    o = random_coverage(rng, n) if kind == "coverage" else random_rec(rng, n)
    perm = rng.permutation(n).tolist()
    a_size = int(rng.integers(0, 6))
    b_size = a_size + int(rng.integers(0, 6))
    A, B, v = perm[:a_size], perm[:b_size], perm[-1]
    ga = o.marginal_gain(o.state_from(A), v)
    gb = o.marginal_gain(o.state_from(B), v)
    assert ga >= 0 and gb >= 0
    assert ga >= gb - 1e-9 * max(abs(ga), abs(gb))
