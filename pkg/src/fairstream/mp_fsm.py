"""Multi-pass fair streaming selection with a descending threshold."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fairness import FairnessSpec, group_sizes
from .solution import Solution
from .stream import group_reservoirs


@dataclass(frozen=True)
class MpFsmConfig:
    epsilon: float = 0.2
    seed: int | None = 0

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")


@dataclass
class MpFsmReport:
    solution: Solution
    passes: int
    oracle_calls: int
    repaired_items: int
    thresholds: list[float]
    peak_items: int
    delta_max: float

    @property
    def utility(self):
        return self.solution.value


def pass_bound(k: int, epsilon: float) -> int:
    """Upper bound on the number of passes: ``2 + ceil(ln(k/eps)/eps)``."""
    return 2 + math.ceil(math.log(k / epsilon) / epsilon)


def run_mp_fsm(stream, oracle, groups, spec: FairnessSpec, cfg: MpFsmConfig = MpFsmConfig()) -> MpFsmReport:
    """Run the multi-pass algorithm over a replayable ``stream``.

    Pass 1 finds the best singleton and fills one reservoir per group.
    Each later pass admits any item whose group has room and whose gain
    reaches the current threshold; the threshold shrinks by ``1 - eps``
    per pass until the solution is full or it drops to ``eps/k`` times the
    best singleton value. Remaining quota is then filled from the
    reservoirs.
    """
    groups = np.asarray(groups, dtype=np.int64)
    spec.check_feasible(group_sizes(groups, spec.l))
    budgets = spec.budgets
    k = spec.k
    eps = cfg.epsilon
    calls0 = oracle.calls
    passes0 = stream.passes

    reservoirs = group_reservoirs(budgets, cfg.seed)
    v_max, delta_max = -1, -1.0
    for v, g in stream.replay():
        if not budgets[g]:
            continue
        val = oracle.singleton_value(v)
        if val > delta_max or (val == delta_max and v < v_max):
            v_max, delta_max = v, val
        reservoirs[g].offer(v)

    sol = Solution(oracle, groups, spec)
    thresholds = []
    peak = k
    if k and delta_max > 0:
        sol.add(v_max, int(groups[v_max]))
        tau = (1.0 - eps) * delta_max
        floor = eps / k * delta_max
        while tau > floor:
            thresholds.append(tau)
            for v, g in stream.replay():
                if v in sol or sol.counts[g] >= budgets[g]:
                    continue
                if sol.gain(v) >= tau:
                    sol.add(v, g)
            if len(sol) == k:
                break
            tau *= 1.0 - eps
        peak = len(sol) + sum(len(r) for r in reservoirs)

    repaired = 0
    for g, res in enumerate(reservoirs):
        for v in res.sample:
            if sol.counts[g] >= budgets[g]:
                break
            if v not in sol:
                sol.add(v, g)
                repaired += 1
    peak = max(peak, len(sol) + sum(len(r) for r in reservoirs))

    return MpFsmReport(
        solution=sol,
        passes=stream.passes - passes0,
        oracle_calls=oracle.calls - calls0,
        repaired_items=repaired,
        thresholds=thresholds,
        peak_items=peak,
        delta_max=max(delta_max, 0.0),
    )
