import math

import numpy as np
import pytest

from fairstream import (CoverageGroundSet, CoverageOracle, FairnessSpec, ForwardStream, SpFsm, SpFsmConfig, Stream,
                        brute_force_opt, run_sp_fsm)
from fairstream.errors import DuplicateItemError
from fairstream.sp_fsm import grid_range, ladder_width_bound
from fairstream.stream import adversarial_order

from conftest import random_instance

INF = math.inf


def star_forest(sizes, extra_groups=None):
    """Item i covers its own ``sizes[i]`` leaves; leaves sit in a zero-budget group."""
    hubs = len(sizes)
    n = hubs + sum(sizes)
    edges, nxt = [], hubs
    for i, s in enumerate(sizes):
        edges += [(i, nxt + j) for j in range(s)]
        nxt += s
    groups = np.full(n, 1 if extra_groups is None else extra_groups, dtype=np.int64)
    groups[:hubs] = 0
    return CoverageOracle(CoverageGroundSet.from_edges(n, edges)), groups


def test_grid_range():
    assert grid_range(1.0, 10.0, 1.5) == (0, 5)
    assert grid_range(0.01, 0.05, 2.0) == (-6, -5)


def test_ladder_from_delta_max():
    oracle, groups = star_forest([10])
    sp = SpFsm(oracle, groups, FairnessSpec((5, 0)), SpFsmConfig(alpha=0.5))
    sp.process(0, 0)
    assert sp.delta_max == 10
    # LB is now 10 too; the first item joins every candidate
    assert all(s.items == [0] for s in sp.ladder.values())
    assert sp.lb == 10
    assert sp.thresholds() == pytest.approx([1, 1.5, 2.25, 3.375, 5.0625, 7.59375])


def test_width_bound_numbers():
    assert ladder_width_bound(5, 0.5) == pytest.approx(math.log(10) / math.log(1.5) + 1)


def test_low_gain_item_discarded():
    oracle, groups = star_forest([10, 10, 1])
    sp = SpFsm(oracle, groups, FairnessSpec((3, 0)))
    sp.process(0, 0)
    sp.process(1, 0)
    assert sp.lb == 20
    sp.process(2, 0)  # gain 1 < beta*LB/k = 3.33 and below every threshold
    assert 2 not in sp.buffer
    assert all(2 not in s for s in sp.ladder.values())


def test_buffering_and_dedup():
    # 3 hubs: 8, 8, 3 leaves; k=2 in one group. The third item fails the high
    # thresholds of full candidates and is buffered only if it joined nothing.
    oracle, groups = star_forest([8, 8, 3])
    sp = SpFsm(oracle, groups, FairnessSpec((2, 0)), SpFsmConfig(audit=True))
    for v in range(3):
        sp.process(v, 0)
    for v in sp.buffer:
        assert all(v not in s for s in sp.ladder.values())
    for tau, v, gain in sp.audit:
        assert gain >= tau


def test_duplicate_processing(path_graph, path_groups):
    sp = SpFsm(path_graph, path_groups, FairnessSpec((1, 1)))
    sp.process(0, 0)
    with pytest.raises(DuplicateItemError):
        sp.process(0, 0)


def test_capacity_below_k_rejected(path_graph, path_groups):
    with pytest.raises(ValueError):
        SpFsm(path_graph, path_groups, FairnessSpec((1, 1)), SpFsmConfig(buffer_capacity=1))


def _stub_buffer(sp, entries, monkeypatch):
    sp.buffer = {v: g for v, (g, _) in entries.items()}
    scores = {v: s for v, (_, s) in entries.items()}
    monkeypatch.setattr(sp, "scores", lambda: dict(scores))


def test_evict_rule3_with_rule4(monkeypatch):
    oracle, groups = star_forest([1, 1, 1, 1])
    sp = SpFsm(oracle, groups, FairnessSpec((1, 0)), SpFsmConfig(buffer_capacity=2))
    _stub_buffer(sp, {0: (0, 5.0), 1: (0, 3.0), 2: (0, 1.0)}, monkeypatch)
    sp.evict()
    assert sorted(sp.buffer) == [0, 1]


def test_evict_rule1(monkeypatch):
    oracle, groups = star_forest([1, 1, 1, 1])
    sp = SpFsm(oracle, groups, FairnessSpec((2, 0)), SpFsmConfig(buffer_capacity=2, beta=0.5))
    sp.lb = 8.0  # floor = 0.5 * 8 / 2 = 2
    _stub_buffer(sp, {0: (0, 5.0), 1: (0, 1.5)}, monkeypatch)
    sp.evict()
    assert sorted(sp.buffer) == [0]


def test_evict_rule4_protects(monkeypatch):
    oracle, groups = star_forest([1, 1, 1, 1], extra_groups=2)
    groups[2:4] = 1
    sp = SpFsm(oracle, groups, FairnessSpec((2, 2, 0)), SpFsmConfig(buffer_capacity=4))
    _stub_buffer(sp, {0: (0, 5.0), 1: (0, 0.5), 2: (1, 0.1), 3: (1, 0.2)}, monkeypatch)
    sp.evict()
    assert sorted(sp.buffer) == [0, 1, 2, 3]


def _spy_completions(monkeypatch):
    import fairstream.sp_fsm as mod
    seen = []
    real = mod.greedy_complete

    def spy(sol, pool):
        seen.append(list(sol.items))
        return real(sol, pool)

    monkeypatch.setattr(mod, "greedy_complete", spy)
    return seen


def test_post_process_branch_all_under_quota(monkeypatch):
    oracle, groups = star_forest([4, 4, 4, 4])
    groups[2:4] = 2
    sp = SpFsm(oracle, groups, FairnessSpec((2, 0, 2)))
    sp.process(0)
    assert all(s.all_under_quota() for s in sp.ladder.values())
    seen = _spy_completions(monkeypatch)
    sp.solution()
    # smallest threshold qualifies, so only that candidate is completed
    assert len(seen) == 1 and len(sp.ladder) > 1


def test_post_process_branch_largest_tau(monkeypatch):
    # the one-item quota of group 0 is filled in every candidate by the first item
    oracle, groups = star_forest([5, 1, 1])
    groups[1:3] = 2
    spec = FairnessSpec((1, 0, 2))
    sp = SpFsm(oracle, groups, spec)
    for v in range(oracle.n):
        sp.process(v)
    assert all(not s.all_under_quota() for s in sp.ladder.values())
    seen = _spy_completions(monkeypatch)
    sol = sp.solution()
    assert len(seen) == len(sp.ladder)
    assert sol.is_fair() and sol.value == 7


def test_path_graph_unlimited_and_bounded(path_graph, path_groups):
    spec = FairnessSpec((1, 1))
    a = run_sp_fsm(Stream.from_group_map(path_groups), path_graph, path_groups, spec)
    b = run_sp_fsm(Stream.from_group_map(path_groups), path_graph, path_groups, spec,
                   SpFsmConfig(buffer_capacity=2 * spec.k))
    assert a.utility == 4 == b.utility
    assert a.solution.is_fair() and b.solution.is_fair()


def test_empty_stream_zero_budget():
    oracle = CoverageOracle(CoverageGroundSet.from_edges(0, []))
    res = run_sp_fsm(Stream([], []), oracle, np.zeros(0, dtype=int), FairnessSpec(()))
    assert res.solution.items == [] and res.utility == 0


def test_forward_only_source(path_graph, path_groups):
    src = ForwardStream(zip(range(4), path_groups.tolist()))
    res = run_sp_fsm(src, path_graph, path_groups, FairnessSpec((1, 1)))
    assert res.items_visited == 4 and res.passes == 1 and src.passes == 1


def test_mid_stream_solution_leaves_state(path_graph, path_groups):
    sp = SpFsm(path_graph, path_groups, FairnessSpec((1, 1)))
    sp.process(1, 0)
    before = {t: (list(s.items), s.value) for t, s in sp.candidates().items()}
    sp.solution()
    assert {t: (list(s.items), s.value) for t, s in sp.candidates().items()} == before


@pytest.mark.parametrize("kind", ["coverage", "rec"])
def test_random_instances(kind):
    rng = np.random.default_rng(41 if kind == "coverage" else 42)
    for _ in range(60):
        oracle, groups, spec = random_instance(rng, kind)
        order = adversarial_order(oracle)
        sp = SpFsm(oracle, groups, spec, SpFsmConfig(audit=True))
        bound = ladder_width_bound(spec.k, 0.5)
        for v in order.tolist():
            c0 = oracle.calls
            width = len(sp.ladder)
            sp.process(v)
            assert len(sp.ladder) <= bound + 1e-9
            assert oracle.calls - c0 <= max(width, len(sp.ladder)) + 1
        assert sp.items_visited == oracle.n
        assert all(g >= t for t, _, g in sp.audit)
        sol = sp.solution()
        opt = brute_force_opt(oracle, groups, spec).value
        assert sol.is_fair()
        assert sol.value >= 0.2 * opt


@pytest.mark.parametrize("kind", ["coverage", "rec"])
def test_bounded_buffer_small_capacity(kind):
    rng = np.random.default_rng(51 if kind == "coverage" else 52)
    for _ in range(40):
        oracle, groups, spec = random_instance(rng, kind, n_max=30, k_max=5)
        sp = SpFsm(oracle, groups, spec, SpFsmConfig(buffer_capacity=spec.k))
        for v in adversarial_order(oracle).tolist():
            sp.process(v)
            assert len(sp.buffer) <= spec.k
        assert sp.solution().is_fair()
