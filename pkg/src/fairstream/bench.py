"""Experiment harness: algorithm x k x policy x order grids written to CSV."""
from __future__ import annotations

import csv
import dataclasses
import math
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import InfeasibleBudgetError
from .exact import greedy
from .fairness import FairnessSpec, allocate_equal, allocate_proportional, explicit_budgets, group_sizes, is_fair
from .mp_fsm import MpFsmConfig, run_mp_fsm
from .solution import Solution
from .sp_fsm import SpFsmConfig, run_sp_fsm
from .stream import Stream, group_reservoirs, group_seed, make_order

CSV_SCHEMA = "fairstream-runs/1"
CSV_FIELDS = (
    "schema", "algorithm", "dataset", "order", "policy", "k", "status", "utility",
    "oracle_calls", "passes", "wall_ms", "peak_buffer", "seed",
)
ALGORITHMS = ("greedy", "mp-fsm", "sp-fsm", "exchange")


# ---------------------------------------------------------------------------
# exchange baseline
# ---------------------------------------------------------------------------

def exchange_baseline(stream, oracle, groups, spec: FairnessSpec, subsample: float = 1.0, seed=0) -> Solution:
    """Single-pass swap heuristic used as a comparison point.

    An item joins when its group has room, weighted by its gain at
    acceptance. Otherwise it replaces the lowest-weight selected item of its
    group if its gain against the rest is at least twice that weight. With
    ``subsample < 1`` each item is considered with that probability. Quotas
    left open at the end are filled from per-group reservoirs.
    """
    groups = np.asarray(groups, dtype=np.int64)
    spec.check_feasible(group_sizes(groups, spec.l))
    budgets = spec.budgets
    reservoirs = group_reservoirs(budgets, seed)
    rng = random.Random(group_seed(seed, len(budgets)))
    chosen: list[list[int]] = [[] for _ in budgets]
    weight: dict[int, float] = {}
    state = oracle.new_state()
    for v, g in stream:
        if not budgets[g]:
            continue
        reservoirs[g].offer(v)
        if subsample < 1.0 and rng.random() >= subsample:
            continue
        if len(chosen[g]) < budgets[g]:
            w = oracle.marginal_gain(state, v)
            oracle.commit(state, v)
            chosen[g].append(v)
            weight[v] = w
            continue
        out = min(chosen[g], key=lambda u: (weight[u], u))
        rest = [u for grp in chosen for u in grp if u != out]
        gain = oracle.marginal_gain(oracle.state_from(rest), v)
        if gain >= 2.0 * weight[out]:
            chosen[g][chosen[g].index(out)] = v
            del weight[out]
            weight[v] = gain
            state = oracle.state_from(rest + [v])

    sol = Solution(oracle, groups, spec)
    for grp in chosen:
        for v in grp:
            sol.add(v)
    for g, res in enumerate(reservoirs):
        for v in res.sample:
            if sol.counts[g] >= budgets[g]:
                break
            if v not in sol:
                sol.add(v, g)
    return sol


# ---------------------------------------------------------------------------
# grid runner
# ---------------------------------------------------------------------------

@dataclass
class RunRecord:
    algorithm: str
    dataset: str
    order: str
    policy: str
    k: int
    status: str = "ok"
    utility: float | None = None
    oracle_calls: int | None = None
    passes: int | None = None
    wall_ms: float | None = None
    peak_buffer: int | None = None
    seed: int | None = None
    selection: list = field(default_factory=list, repr=False)

    def row(self) -> dict:
        def fmt(x):
            if x is None:
                return ""
            if isinstance(x, float):
                return repr(x) if x != int(x) or abs(x) >= 1e16 else str(int(x))
            return str(x)
        vals = {f.name: getattr(self, f.name) for f in dataclasses.fields(self) if f.name != "selection"}
        vals["wall_ms"] = "" if self.wall_ms is None else f"{self.wall_ms:.3f}"
        out = {"schema": CSV_SCHEMA}
        out.update({key: (vals[key] if key == "wall_ms" else fmt(vals[key])) for key in CSV_FIELDS[1:]})
        return out


@dataclass
class Dataset:
    name: str
    oracle: object
    groups: np.ndarray

    @property
    def n(self):
        return self.oracle.n


@dataclass
class ExperimentConfig:
    dataset: Dataset
    algorithms: Sequence[str] = ("greedy", "mp-fsm", "sp-fsm")
    ks: Sequence[int] = (10,)
    policies: Sequence[str] = ("pr",)
    orders: Sequence[str] = ("natural",)
    epsilon: float = 0.2
    alpha: float = 0.5
    beta: float = 0.5
    buffer: str = "inf"
    reference: bool = False
    subsample: float = 1.0
    seed: int = 0


def resolve_policy(policy: str, sizes, k: int) -> FairnessSpec:
    if policy == "pr":
        return allocate_proportional(sizes, k)
    if policy == "er":
        return allocate_equal(sizes, k)
    if policy.startswith("explicit:"):
        spec = explicit_budgets(policy.split(":", 1)[1])
        if spec.k != k:
            raise InfeasibleBudgetError(f"explicit budgets sum to {spec.k}, not k={k}")
        return spec
    raise ValueError(f"unknown policy {policy!r}")


def resolve_buffer(buffer, k: int) -> float:
    if buffer in ("inf", None, math.inf):
        return math.inf
    if isinstance(buffer, str) and buffer.endswith("k"):
        mult = buffer[:-1]
        return int(mult or 1) * k
    return int(buffer)


def _check_fair(sol, groups, spec, label):
    if not is_fair(sol.items, groups, spec):
        raise AssertionError(f"{label}: solution violates the group quotas")


def _run_cell(cfg: ExperimentConfig, alg: str, k: int, policy: str, order: str) -> RunRecord:
    ds = cfg.dataset
    oracle, groups = ds.oracle, ds.groups
    rec = RunRecord(alg, ds.name, order, policy, k, seed=cfg.seed)
    l = int(groups.max()) + 1 if groups.size else 0
    sizes = group_sizes(groups, l)
    try:
        if alg == "greedy-unconstrained":
            spec, run_groups = FairnessSpec((k,)), np.zeros_like(groups)
            spec.check_feasible([groups.size])
        else:
            spec, run_groups = resolve_policy(policy, sizes, k), groups
            spec.check_feasible(sizes)
    except InfeasibleBudgetError:
        rec.status = "infeasible"
        return rec

    stream = Stream.from_group_map(run_groups, make_order(order, oracle))
    calls0 = oracle.calls
    t0 = time.perf_counter()
    if alg in ("greedy", "greedy-unconstrained"):
        sol = greedy(oracle, run_groups, spec)
        rec.passes = spec.k
    elif alg == "mp-fsm":
        rep = run_mp_fsm(stream, oracle, run_groups, spec, MpFsmConfig(cfg.epsilon, cfg.seed))
        sol, rec.passes = rep.solution, rep.passes
    elif alg == "sp-fsm":
        sp_cfg = SpFsmConfig(cfg.alpha, cfg.beta, resolve_buffer(cfg.buffer, k), cfg.seed)
        rep = run_sp_fsm(stream, oracle, run_groups, spec, sp_cfg)
        sol, rec.passes, rec.peak_buffer = rep.solution, rep.passes, rep.peak_buffer
    elif alg == "exchange":
        sol = exchange_baseline(stream, oracle, run_groups, spec, cfg.subsample, cfg.seed)
        rec.passes = 1
    else:
        raise ValueError(f"unknown algorithm {alg!r}")
    rec.wall_ms = (time.perf_counter() - t0) * 1000.0
    rec.oracle_calls = oracle.calls - calls0
    _check_fair(sol, run_groups, spec, f"{alg} k={k} {policy} {order}")
    rec.utility = float(oracle.evaluate(sol.items))
    rec.selection = list(sol.items)
    return rec


def run_experiment(cfg: ExperimentConfig, progress: Callable[[RunRecord], None] | None = None) -> list[RunRecord]:
    """Run every (algorithm, k, policy, order) cell in grid order.

    With ``reference`` set, one unconstrained greedy row per (k, order) is
    appended after the fair rows for that k.
    """
    records = []
    for k in cfg.ks:
        for policy in cfg.policies:
            for order in cfg.orders:
                for alg in cfg.algorithms:
                    records.append(_run_cell(cfg, alg, k, policy, order))
                    if progress:
                        progress(records[-1])
        if cfg.reference:
            records.append(_run_cell(cfg, "greedy-unconstrained", k, "none", "natural"))
            if progress:
                progress(records[-1])
    return records


def price_of_fairness(records: Sequence[RunRecord]) -> dict[tuple[int, str], float]:
    """``utility(unconstrained greedy) - utility(fair greedy)`` per (k, policy)."""
    ref = {r.k: r.utility for r in records if r.algorithm == "greedy-unconstrained" and r.status == "ok"}
    return {(r.k, r.policy): ref[r.k] - r.utility for r in records
            if r.algorithm == "greedy" and r.status == "ok" and r.k in ref}


def price_of_streaming(records: Sequence[RunRecord]) -> dict[tuple[int, str, str, str], float]:
    """``utility(fair greedy) - utility(alg)`` per (k, policy, order, alg) for every other algorithm."""
    ref = {(r.k, r.policy, r.order): r.utility for r in records if r.algorithm == "greedy" and r.status == "ok"}
    return {(r.k, r.policy, r.order, r.algorithm): ref[r.k, r.policy, r.order] - r.utility for r in records
            if r.algorithm not in ("greedy", "greedy-unconstrained") and r.status == "ok"
            and (r.k, r.policy, r.order) in ref}


def emit_csv(records: Sequence[RunRecord], path):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\r\n")
        writer.writeheader()
        for r in records:
            writer.writerow(r.row())
