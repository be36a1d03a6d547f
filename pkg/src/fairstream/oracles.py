"""Monotone submodular value oracles.

Two objectives are provided:

* ``CoverageOracle``: ``f(S) = |union of N(v) for v in S|`` over a graph.
* ``RecommendationOracle``: a facility-location / relevance mixture,
  ``f(S) = lam * sum_{w in V} max_{v in S} <w, v> + (1 - lam) * sum_{v in S} <u, v>``.

Both keep per-solution incremental state so a marginal gain is evaluated
without recomputing ``f`` from scratch. Every gain or singleton evaluation
increments a shared call counter, which is the cost unit used by the
benchmarks.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DataFormatError, DuplicateItemError, InvalidItemError


class CallCounter:
    """Thread-safe monotone counter."""

    def __init__(self):
        self._lock = threading.Lock()
        self._value = 0

    def add(self, n=1):
        with self._lock:
            self._value += n

    @property
    def value(self):
        return self._value


class OracleState:
    """Incremental state for one selection. Owned by a single candidate."""

    __slots__ = ("members", "value")

    def __init__(self):
        self.members: set[int] = set()
        self.value = 0.0

    def __len__(self):
        return len(self.members)

    def __contains__(self, v):
        return v in self.members


class SubmodularOracle:
    """Base class: subclasses implement ``_gain``, ``_gains`` and ``_commit``."""

    n: int

    def __init__(self):
        self._calls = CallCounter()

    # -- call accounting -------------------------------------------------
    def call_count(self) -> int:
        return self._calls.value

    @property
    def calls(self) -> int:
        return self._calls.value

    # -- public contract -------------------------------------------------
    def new_state(self) -> OracleState:
        raise NotImplementedError

    def marginal_gain(self, state: OracleState, v: int) -> float:
        """Return ``f(S + v) - f(S)`` without mutating ``state``."""
        v = self._check(v)
        self._calls.add()
        return self._gain(state, v)

    gain = marginal_gain

    def gains(self, state: OracleState, items: Sequence[int]) -> np.ndarray:
        """Vectorised marginal gains; counts one call per item."""
        items = np.asarray(items, dtype=np.int64)
        if items.size == 0:
            return np.zeros(0)
        if items.min() < 0 or items.max() >= self.n:
            bad = items[(items < 0) | (items >= self.n)][0]
            raise InvalidItemError(f"unknown item {int(bad)}")
        self._calls.add(int(items.size))
        return self._gains(state, items)

    def commit(self, state: OracleState, v: int) -> float:
        """Add ``v`` to ``state`` in place and return the realised gain."""
        v = self._check(v)
        if v in state.members:
            raise DuplicateItemError(f"item {v} already selected")
        g = self._commit(state, v)
        state.members.add(v)
        state.value += g
        return g

    def singleton_value(self, v: int) -> float:
        v = self._check(v)
        self._calls.add()
        return self._singleton(v)

    def evaluate(self, items: Iterable[int]) -> float:
        """``f(S)`` from scratch. Not counted: used for verification only."""
        state = self.new_state()
        for v in items:
            self.commit(state, v)
        return state.value

    def state_from(self, items: Iterable[int]) -> OracleState:
        state = self.new_state()
        for v in items:
            self.commit(state, v)
        return state

    # -- internals ---------------------------------------------------------
    def _check(self, v) -> int:
        try:
            iv = int(v)
        except (TypeError, ValueError):
            raise InvalidItemError(f"unknown item {v!r}") from None
        if iv != v or not 0 <= iv < self.n:
            raise InvalidItemError(f"unknown item {v!r}")
        return iv

    def _gain(self, state, v):
        raise NotImplementedError

    def _gains(self, state, items):
        return np.array([self._gain(state, int(v)) for v in items], dtype=float)

    def _commit(self, state, v):
        raise NotImplementedError

    def _singleton(self, v):
        return self._gain(self.new_state(), v)


# ---------------------------------------------------------------------------
# Coverage
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoverageGroundSet:
    """Graph in CSR form; ``N(v) = indices[indptr[v]:indptr[v+1]]`` (sorted, unique)."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray

    @classmethod
    def from_edges(cls, n, edges, directed=True):
        """Build from an ``(m, 2)`` array of ``src dst`` pairs.

        With ``directed=False`` every edge contributes both directions.
        Duplicate edges collapse.
        """
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if edges.size and (edges.min() < 0 or edges.max() >= n):
            raise ValueError("edge endpoint outside [0, n)")
        if not directed:
            edges = np.concatenate([edges, edges[:, ::-1]])
        if edges.size:
            edges = np.unique(edges, axis=0)
        counts = np.bincount(edges[:, 0], minlength=n) if edges.size else np.zeros(n, np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        indices = edges[:, 1].copy() if edges.size else np.zeros(0, np.int64)
        for a in (indptr, indices):
            a.setflags(write=False)
        return cls(n, indptr, indices)

    @classmethod
    def from_adjacency(cls, adjacency: Sequence[Iterable[int]]):
        edges = [(u, w) for u, nbrs in enumerate(adjacency) for w in nbrs]
        return cls.from_edges(len(adjacency), np.array(edges, dtype=np.int64).reshape(-1, 2))

    def neighbors(self, v) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def m(self):
        return int(self.indices.size)

    def edges(self) -> np.ndarray:
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degree())
        return np.column_stack([src, self.indices])


class CoverageState(OracleState):
    __slots__ = ("covered",)

    def __init__(self, n):
        super().__init__()
        self.covered = np.zeros(n, dtype=bool)

    def copy(self):
        s = CoverageState.__new__(CoverageState)
        s.members = set(self.members)
        s.value = self.value
        s.covered = self.covered.copy()
        return s


class CoverageOracle(SubmodularOracle):
    """Maximum coverage: value is the number of distinct covered nodes."""

    def __init__(self, ground: CoverageGroundSet):
        super().__init__()
        self.ground = ground
        self.n = ground.n
        self._indptr = ground.indptr
        self._indices = ground.indices
        self._deg = ground.degree()

    def new_state(self):
        return CoverageState(self.n)

    def _gain(self, state, v):
        nb = self._indices[self._indptr[v]:self._indptr[v + 1]]
        return float(nb.size - np.count_nonzero(state.covered[nb]))

    def _gains(self, state, items):
        lengths = self._deg[items]
        total = int(lengths.sum())
        if total == 0:
            return np.zeros(items.size)
        starts = np.repeat(self._indptr[items], lengths)
        offsets = np.arange(total) - np.repeat(np.cumsum(lengths) - lengths, lengths)
        fresh = ~state.covered[self._indices[starts + offsets]]
        owner = np.repeat(np.arange(items.size), lengths)
        return np.bincount(owner, weights=fresh, minlength=items.size)

    def _commit(self, state, v):
        nb = self._indices[self._indptr[v]:self._indptr[v + 1]]
        g = float(nb.size - np.count_nonzero(state.covered[nb]))
        state.covered[nb] = True
        return g

    def _singleton(self, v):
        return float(self._deg[v])

    def value_from_scratch(self, items: Sequence[int]) -> float:
        covered = set()
        for v in items:
            covered.update(self.ground.neighbors(v).tolist())
        return float(len(covered))


# ---------------------------------------------------------------------------
# Personalized recommendation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RecGroundSet:
    """Nonnegative item feature matrix plus one user vector."""

    item_vectors: np.ndarray
    user_vector: np.ndarray
    lam: float = 0.75
    ids: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        X = np.ascontiguousarray(self.item_vectors, dtype=float)
        u = np.ascontiguousarray(self.user_vector, dtype=float).ravel()
        if X.ndim != 2:
            raise DataFormatError("item vectors must form an (n, d) matrix")
        if u.shape[0] != X.shape[1]:
            raise DataFormatError(f"user dimension {u.shape[0]} != item dimension {X.shape[1]}")
        if (X < 0).any() or (u < 0).any():
            raise DataFormatError("feature vectors must be nonnegative")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("lam must lie in [0, 1]")
        X.setflags(write=False)
        u.setflags(write=False)
        object.__setattr__(self, "item_vectors", X)
        object.__setattr__(self, "user_vector", u)

    @property
    def n(self):
        return self.item_vectors.shape[0]

    @property
    def d(self):
        return self.item_vectors.shape[1]


class RecState(OracleState):
    __slots__ = ("best", "relevance")

    def __init__(self, n):
        super().__init__()
        # max over an empty selection is 0
        self.best = np.zeros(n)
        self.relevance = 0.0

    def copy(self):
        s = RecState.__new__(RecState)
        s.members = set(self.members)
        s.value = self.value
        s.best = self.best.copy()
        s.relevance = self.relevance
        return s


class RecommendationOracle(SubmodularOracle):
    """Representativeness plus user relevance, mixed by ``lam``.

    The full item matrix stays in memory: the representativeness term sums
    over every item regardless of stream position.
    """

    _chunk = 256

    def __init__(self, ground: RecGroundSet):
        super().__init__()
        self.ground = ground
        self.n = ground.n
        self.lam = float(ground.lam)
        self._X = ground.item_vectors
        self._rel = self._X @ ground.user_vector

    def new_state(self):
        return RecState(self.n)

    def _gain(self, state, v):
        sims = self._X @ self._X[v]
        cover = np.maximum(sims - state.best, 0.0).sum()
        return float(self.lam * cover + (1.0 - self.lam) * self._rel[v])

    def _gains(self, state, items):
        out = np.empty(items.size)
        for lo in range(0, items.size, self._chunk):
            block = items[lo:lo + self._chunk]
            sims = self._X[block] @ self._X.T
            cover = np.maximum(sims - state.best, 0.0).sum(axis=1)
            out[lo:lo + self._chunk] = self.lam * cover + (1.0 - self.lam) * self._rel[block]
        return out

    def _commit(self, state, v):
        sims = self._X @ self._X[v]
        cover = np.maximum(sims - state.best, 0.0).sum()
        np.maximum(state.best, sims, out=state.best)
        state.relevance += self._rel[v]
        return float(self.lam * cover + (1.0 - self.lam) * self._rel[v])

    def value_from_scratch(self, items: Sequence[int]) -> float:
        """Direct evaluation of the closed form, independent of the incremental path."""
        items = list(items)
        if not items:
            return 0.0
        sims = self._X @ self._X[items].T
        return float(self.lam * sims.max(axis=1).sum() + (1.0 - self.lam) * self._rel[items].sum())
