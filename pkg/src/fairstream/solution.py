"""A feasible partial selection with per-group counts and cached utility."""
from __future__ import annotations

import numpy as np

from .errors import DuplicateItemError
from .fairness import FairnessSpec, is_fair


class Solution:
    """Selection ``S`` under a partition constraint.

    ``add`` refuses items whose group is already at quota; the cached
    ``value`` always equals ``f(S)`` because it is maintained by the
    oracle's incremental state.
    """

    __slots__ = ("oracle", "groups", "spec", "items", "counts", "state")

    def __init__(self, oracle, groups, spec: FairnessSpec):
        self.oracle = oracle
        self.groups = groups
        self.spec = spec
        self.items: list[int] = []
        self.counts = [0] * spec.l
        self.state = oracle.new_state()

    @property
    def value(self) -> float:
        return self.state.value

    @property
    def utility(self) -> float:
        return self.state.value

    def __len__(self):
        return len(self.items)

    def __contains__(self, v):
        return v in self.state.members

    def __iter__(self):
        return iter(self.items)

    def __repr__(self):
        return f"Solution(items={self.items}, value={self.value:g})"

    def has_room(self, group: int) -> bool:
        return self.counts[group] < self.spec.budgets[group]

    def is_complete(self) -> bool:
        return len(self.items) == self.spec.k

    def all_under_quota(self) -> bool:
        """Every group with a positive budget is strictly below it."""
        return all(c < b for c, b in zip(self.counts, self.spec.budgets) if b > 0)

    def gain(self, v: int) -> float:
        return self.oracle.marginal_gain(self.state, v)

    def add(self, v: int, group: int | None = None) -> float:
        g = int(self.groups[v]) if group is None else group
        if v in self.state.members:
            raise DuplicateItemError(f"item {v} already selected")
        if not self.has_room(g):
            raise ValueError(f"group {g} is already at quota")
        gain = self.oracle.commit(self.state, v)
        self.items.append(v)
        self.counts[g] += 1
        return gain

    def copy(self) -> "Solution":
        s = Solution.__new__(Solution)
        s.oracle = self.oracle
        s.groups = self.groups
        s.spec = self.spec
        s.items = list(self.items)
        s.counts = list(self.counts)
        s.state = self.state.copy()
        return s

    def is_fair(self) -> bool:
        return is_fair(self.items, self.groups, self.spec)

    def recompute(self) -> float:
        return self.oracle.evaluate(self.items)


def member_array(items) -> np.ndarray:
    return np.fromiter(items, dtype=np.int64)
