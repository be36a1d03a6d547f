"""Item streams and per-group reservoir sampling."""
from __future__ import annotations

import random
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .errors import ReplayUnsupportedError


class StreamItem(NamedTuple):
    item: int
    group: int


class Stream:
    """A materialised, replayable stream. Every pass yields the same order."""

    def __init__(self, items: Sequence[int], groups: Sequence[int]):
        items = np.asarray(items, dtype=np.int64)
        groups = np.asarray(groups, dtype=np.int64)
        if items.shape != groups.shape:
            raise ValueError("items and groups must have equal length")
        self._items = items.tolist()
        self._groups = groups.tolist()
        self.passes = 0

    @classmethod
    def from_group_map(cls, group_map, order: Sequence[int] | None = None):
        """Stream over items ``order`` (default ``0..n-1``) with groups looked up in ``group_map``."""
        group_map = np.asarray(group_map, dtype=np.int64)
        order = np.arange(group_map.size) if order is None else np.asarray(order, dtype=np.int64)
        return cls(order, group_map[order])

    def __len__(self):
        return len(self._items)

    def __iter__(self) -> Iterator[StreamItem]:
        return self.replay()

    def replay(self) -> Iterator[StreamItem]:
        self.passes += 1
        return (StreamItem(v, g) for v, g in zip(self._items, self._groups))

    @property
    def items(self) -> list[int]:
        return list(self._items)


class ForwardStream:
    """A forward-only source: the second pass raises ``ReplayUnsupportedError``."""

    def __init__(self, source: Iterable):
        self._source = source
        self.passes = 0

    def __iter__(self) -> Iterator[StreamItem]:
        return self.replay()

    def replay(self) -> Iterator[StreamItem]:
        if self.passes:
            raise ReplayUnsupportedError("forward-only stream cannot be replayed")
        self.passes += 1
        return (StreamItem(int(v), int(g)) for v, g in self._source)


def group_seed(seed, group: int) -> int:
    """Independent per-group seed derived from one run seed."""
    seq = np.random.SeedSequence(0 if seed is None else seed, spawn_key=(int(group),))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


class Reservoir:
    """Algorithm R: a uniform sample of ``capacity`` items from one group's stream."""

    __slots__ = ("capacity", "sample", "seen", "_rng")

    def __init__(self, capacity: int, seed=None, rng: random.Random | None = None):
        if capacity < 0:
            raise ValueError("capacity must be nonnegative")
        self.capacity = int(capacity)
        self.sample: list[int] = []
        self.seen = 0
        self._rng = rng if rng is not None else random.Random(seed)

    def offer(self, v: int):
        if self.seen < self.capacity:
            self.sample.append(v)
        elif self.capacity:
            j = self._rng.randrange(self.seen + 1)
            if j < self.capacity:
                self.sample[j] = v
        self.seen += 1
        return self

    def __len__(self):
        return len(self.sample)

    def __iter__(self):
        return iter(self.sample)

    def __contains__(self, v):
        return v in self.sample


def group_reservoirs(budgets: Sequence[int], seed=None) -> list[Reservoir]:
    return [Reservoir(b, seed=group_seed(seed, i)) for i, b in enumerate(budgets)]


# ---------------------------------------------------------------------------
# arrival orders
# ---------------------------------------------------------------------------

def natural_order(n: int) -> np.ndarray:
    return np.arange(n, dtype=np.int64)


def shuffled_order(n: int, seed) -> np.ndarray:
    return np.random.default_rng(seed).permutation(n).astype(np.int64)


def adversarial_order(oracle) -> np.ndarray:
    """Items ascending by singleton value (ties: lower id first).

    Uses the oracle, so callers that meter oracle calls should take their
    baseline after building the order.
    """
    vals = oracle.gains(oracle.new_state(), np.arange(oracle.n))
    return np.lexsort((np.arange(oracle.n), vals)).astype(np.int64)


def make_order(spec: str, oracle) -> np.ndarray:
    """Parse ``natural``, ``shuffle:<seed>`` or ``adversarial``."""
    if spec == "natural":
        return natural_order(oracle.n)
    if spec == "adversarial":
        return adversarial_order(oracle)
    if spec.startswith("shuffle:"):
        return shuffled_order(oracle.n, int(spec.split(":", 1)[1]))
    raise ValueError(f"unknown order {spec!r}")
