"""Partition (fairness) constraints and budget allocation policies."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InfeasibleBudgetError


@dataclass(frozen=True)
class FairnessSpec:
    """Exact per-group quotas ``k_1..k_l``; a fair set holds ``k_i`` items of group ``i``."""

    budgets: tuple[int, ...]

    def __post_init__(self):
        budgets = tuple(int(b) for b in self.budgets)
        if any(b < 0 for b in budgets):
            raise ValueError("budgets must be nonnegative")
        object.__setattr__(self, "budgets", budgets)

    @property
    def l(self) -> int:
        return len(self.budgets)

    @property
    def k(self) -> int:
        return sum(self.budgets)

    def active(self, group: int) -> bool:
        return self.budgets[group] > 0

    def check_feasible(self, group_sizes: Sequence[int]):
        """Raise unless ``k_i <= |V_i|`` for every group."""
        if len(group_sizes) < self.l:
            group_sizes = list(group_sizes) + [0] * (self.l - len(group_sizes))
        short = [i for i, (b, s) in enumerate(zip(self.budgets, group_sizes)) if b > s]
        if short:
            raise InfeasibleBudgetError(
                "budget exceeds group size for groups " + ", ".join(map(str, short)), short)

    def is_feasible(self, group_sizes: Sequence[int]) -> bool:
        try:
            self.check_feasible(group_sizes)
        except InfeasibleBudgetError:
            return False
        return True


def group_sizes(groups: np.ndarray, l: int | None = None) -> np.ndarray:
    groups = np.asarray(groups, dtype=np.int64)
    if l is None:
        l = int(groups.max()) + 1 if groups.size else 0
    return np.bincount(groups, minlength=l)


def allocate_proportional(sizes: Sequence[int], k: int) -> FairnessSpec:
    """Largest-remainder apportionment of ``k`` seats in proportion to ``sizes``.

    Ties in the remainder go to the lower group index. Integer arithmetic
    throughout, so the result is exact and deterministic.
    """
    sizes = [int(s) for s in sizes]
    if any(s < 0 for s in sizes):
        raise ValueError("group sizes must be nonnegative")
    n = sum(sizes)
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k > n:
        raise InfeasibleBudgetError(f"k={k} exceeds the {n} available items")
    if k == 0:
        return FairnessSpec((0,) * len(sizes))
    floors = [s * k // n for s in sizes]
    rema = [s * k % n for s in sizes]
    spare = k - sum(floors)
    order = sorted(range(len(sizes)), key=lambda i: (-rema[i], i))
    for i in order[:spare]:
        floors[i] += 1
    return FairnessSpec(tuple(floors))


def allocate_equal(sizes: Sequence[int], k: int) -> FairnessSpec:
    """Equal seats per group, capped at each group's size.

    Seats are handed out one at a time to the eligible group holding the
    fewest seats, preferring larger groups and then lower indices. Without
    capping this is ``k // l`` each with the ``k % l`` spare seats going to
    the largest groups; a capped group's overflow moves to the next
    eligible group in the same order.
    """
    sizes = [int(s) for s in sizes]
    l = len(sizes)
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k > sum(sizes):
        share = -(-k // l) if l else 0
        short = [i for i, s in enumerate(sizes) if s < share]
        raise InfeasibleBudgetError(
            f"k={k} cannot be met; deficient groups: {short}", short)
    seats = [0] * l
    for _ in range(k):
        i = min((g for g in range(l) if seats[g] < sizes[g]),
                key=lambda g: (seats[g], -sizes[g], g))
        seats[i] += 1
    return FairnessSpec(tuple(seats))


def explicit_budgets(budgets: Iterable[int] | str) -> FairnessSpec:
    if isinstance(budgets, str):
        budgets = [int(b) for b in budgets.split(",") if b.strip()]
    return FairnessSpec(tuple(budgets))


def is_fair(selection: Iterable[int], groups, spec: FairnessSpec) -> bool:
    """True iff the selection holds exactly ``k_i`` distinct items from every group."""
    selection = list(selection)
    if len(set(selection)) != len(selection):
        return False
    counts = [0] * spec.l
    for v in selection:
        g = int(groups[v])
        if g >= spec.l:
            return False
        counts[g] += 1
    return tuple(counts) == spec.budgets
