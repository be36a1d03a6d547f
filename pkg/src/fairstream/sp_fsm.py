"""Single-pass fair streaming selection.

A ladder of candidate solutions, one per threshold ``(1+alpha)**j``, is kept
over the live range ``[max(delta_max, LB) / 2k, delta_max]``. Items that fail
a candidate's threshold but still carry a gain of at least ``beta*LB/k`` are
parked in a buffer. When a solution is requested, candidates are completed
greedily from the buffer and the per-group reservoirs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DuplicateItemError
from .exact import greedy_complete
from .fairness import FairnessSpec, group_sizes
from .solution import Solution
from .stream import group_reservoirs


@dataclass(frozen=True)
class SpFsmConfig:
    alpha: float = 0.5
    beta: float = 0.5
    buffer_capacity: float = math.inf
    seed: int | None = 0
    audit: bool = False

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must lie in (0, 1)")
        if self.buffer_capacity != math.inf and int(self.buffer_capacity) != self.buffer_capacity:
            raise ValueError("buffer_capacity must be an integer or inf")


def ladder_width_bound(k: int, alpha: float) -> float:
    return math.log(2 * k) / math.log1p(alpha) + 1


def grid_range(lo: float, hi: float, base: float) -> tuple[int, int]:
    """Integer exponents ``j`` with ``lo <= base**j <= hi`` as an inclusive pair."""
    jlo = math.ceil(math.log(lo) / math.log(base))
    while base ** (jlo - 1) >= lo:
        jlo -= 1
    while base ** jlo < lo:
        jlo += 1
    jhi = math.floor(math.log(hi) / math.log(base))
    while base ** (jhi + 1) <= hi:
        jhi += 1
    while base ** jhi > hi:
        jhi -= 1
    return jlo, jhi


@dataclass
class SpFsmReport:
    solution: Solution
    oracle_calls: int
    items_visited: int
    peak_buffer: int
    peak_ladder: int
    evictions: int
    passes: int = 1
    candidates: dict = field(default_factory=dict)

    @property
    def utility(self):
        return self.solution.value


class SpFsm:
    """Streaming state. Feed items with ``process``; ask for ``solution()`` at any time."""

    def __init__(self, oracle, groups, spec: FairnessSpec, cfg: SpFsmConfig = SpFsmConfig()):
        self.oracle = oracle
        self.groups = np.asarray(groups, dtype=np.int64)
        self.spec = spec
        self.cfg = cfg
        k = spec.k
        if cfg.buffer_capacity != math.inf and cfg.buffer_capacity < k:
            raise ValueError(f"buffer capacity {cfg.buffer_capacity} is below k={k}")
        self.capacity = cfg.buffer_capacity
        self.base = 1.0 + cfg.alpha
        self.delta_max = 0.0
        self.lb = 0.0
        self.ladder: dict[int, Solution] = {}
        # item -> group; scores are refreshed on demand
        self.buffer: dict[int, int] = {}
        self.reservoirs = group_reservoirs(spec.budgets, cfg.seed)
        self._visited = np.zeros(oracle.n, dtype=bool)
        self.items_visited = 0
        self.peak_buffer = 0
        self.peak_ladder = 0
        self.evictions = 0
        self.audit: list[tuple[float, int, float]] = []

    # ------------------------------------------------------------------
    def tau(self, j: int) -> float:
        return self.base ** j

    def thresholds(self) -> list[float]:
        return [self.tau(j) for j in sorted(self.ladder)]

    def _refresh_ladder(self):
        if self.delta_max <= 0:
            return
        lo = max(self.delta_max, self.lb) / (2 * self.spec.k)
        jlo, jhi = grid_range(lo, self.delta_max, self.base)
        for j in [j for j in self.ladder if j < jlo or j > jhi]:
            del self.ladder[j]
        for j in range(jlo, jhi + 1):
            if j not in self.ladder:
                self.ladder[j] = Solution(self.oracle, self.groups, self.spec)

    def process(self, v: int, g: int | None = None):
        v = int(v)
        g = int(self.groups[v]) if g is None else int(g)
        if self._visited[v]:
            raise DuplicateItemError(f"item {v} was already processed")
        self._visited[v] = True
        self.items_visited += 1
        k_g = self.spec.budgets[g]
        if not k_g:
            return

        self.delta_max = max(self.delta_max, self.oracle.singleton_value(v))
        self.reservoirs[g].offer(v)
        self._refresh_ladder()
        self.peak_ladder = max(self.peak_ladder, len(self.ladder))

        buffer_floor = self.cfg.beta * self.lb / self.spec.k
        joined = deferred = False
        for j in sorted(self.ladder):
            sol = self.ladder[j]
            if sol.counts[g] >= k_g:
                continue
            gain = sol.gain(v)
            tau = self.tau(j)
            if gain >= tau:
                sol.add(v, g)
                joined = True
                if self.cfg.audit:
                    self.audit.append((tau, v, gain))
            elif gain >= buffer_floor and gain > 0:
                deferred = True
        if deferred and not joined:
            self.buffer[v] = g
        if self.ladder:
            self.lb = max(self.lb, max(s.value for s in self.ladder.values()))

        if len(self.buffer) > self.capacity:
            self.evict()
        self.peak_buffer = max(self.peak_buffer, len(self.buffer))

    def scores(self) -> dict[int, float]:
        """``delta(v) = max over live candidates of the gain of v``, for every buffered item."""
        items = np.fromiter(self.buffer, dtype=np.int64, count=len(self.buffer))
        best = np.zeros(items.size)
        for sol in self.ladder.values():
            np.maximum(best, self.oracle.gains(sol.state, items), out=best)
        return dict(zip(items.tolist(), best.tolist()))

    def evict(self):
        """Shrink the buffer to capacity.

        Drops items whose refreshed score fell under ``beta*LB/k``; then
        drops the lowest-scoring item among groups holding more than their
        quota in the buffer (higher id first on ties) until the buffer fits.
        Groups at or below quota are never touched, so with capacity >= k
        this always terminates.
        """
        scores = self.scores()
        floor = self.cfg.beta * self.lb / self.spec.k
        for v, s in scores.items():
            if s < floor:
                del self.buffer[v]
                self.evictions += 1
        budgets = self.spec.budgets
        per_group = np.bincount(np.fromiter(self.buffer.values(), dtype=np.int64),
                                minlength=self.spec.l)
        while len(self.buffer) > self.capacity:
            victims = [v for v, g in self.buffer.items() if per_group[g] > budgets[g]]
            if not victims:
                break
            v = min(victims, key=lambda u: (scores[u], -u))
            per_group[self.buffer.pop(v)] -= 1
            self.evictions += 1

    # ------------------------------------------------------------------
    def candidates(self) -> dict[float, Solution]:
        return {self.tau(j): self.ladder[j] for j in sorted(self.ladder)}

    def pool(self) -> list[int]:
        items = set(self.buffer)
        for r in self.reservoirs:
            items.update(r.sample)
        return sorted(items)

    def solution(self) -> Solution:
        """Post-process a snapshot; live state is left untouched.

        Picks the smallest threshold whose candidate is under quota in every
        group (or the largest threshold if none is), completes that
        candidate and every lower one greedily from buffer plus reservoirs,
        and returns the best completion.
        """
        if self.spec.k == 0:
            return Solution(self.oracle, self.groups, self.spec)
        js = sorted(self.ladder)
        if js:
            chosen = next((j for j in js if self.ladder[j].all_under_quota()), js[-1])
            starts = [self.ladder[j].copy() for j in js if j <= chosen]
        else:
            starts = [Solution(self.oracle, self.groups, self.spec)]
        pool = self.pool()
        best = None
        for sol in starts:
            greedy_complete(sol, pool)
            if best is None or (len(sol), sol.value) > (len(best), best.value):
                best = sol
        return best


def run_sp_fsm(stream, oracle, groups, spec: FairnessSpec, cfg: SpFsmConfig = SpFsmConfig()) -> SpFsmReport:
    """One pass over ``stream`` (forward-only sources are fine), then post-processing."""
    groups = np.asarray(groups, dtype=np.int64)
    spec.check_feasible(group_sizes(groups, spec.l))
    calls0 = oracle.calls
    sp = SpFsm(oracle, groups, spec, cfg)
    for v, g in stream:
        sp.process(v, g)
    candidates = {tau: s.copy() for tau, s in sp.candidates().items()}
    sol = sp.solution()
    return SpFsmReport(
        solution=sol,
        oracle_calls=oracle.calls - calls0,
        items_visited=sp.items_visited,
        peak_buffer=sp.peak_buffer,
        peak_ladder=sp.peak_ladder,
        evictions=sp.evictions,
        candidates=candidates,
    )
