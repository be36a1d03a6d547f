"""Fairness-aware greedy and an exhaustive optimiser for small instances."""
from __future__ import annotations

import heapq
import itertools
import math
from typing import Iterable

import numpy as np

from .errors import InstanceTooLargeError
from .fairness import FairnessSpec, group_sizes
from .solution import Solution

BRUTE_FORCE_LIMIT = 10**7


def greedy_complete(sol: Solution, pool: Iterable[int]) -> Solution:
    """Fill ``sol`` in place by repeated max-gain picks from ``pool``.

    Each round considers the pool items not yet selected whose group still
    has room, and adds the one with the largest marginal gain (lowest id on
    ties). Zero-gain picks are allowed: quotas are equalities. Stops when
    ``|S| = k`` or nothing eligible remains.
    """
    pool = np.unique(np.fromiter(pool, dtype=np.int64))
    groups = np.asarray(sol.groups)
    budgets = np.asarray(sol.spec.budgets, dtype=np.int64)
    if pool.size:
        pool = pool[budgets[groups[pool]] > 0]
        pool = pool[[v not in sol for v in pool.tolist()]]
    pool_groups = groups[pool]
    k = sol.spec.k
    while len(sol) < k and pool.size:
        room = np.asarray(sol.counts, dtype=np.int64) < budgets
        mask = room[pool_groups]
        if not mask.any():
            break
        cand = pool[mask]
        gains = sol.oracle.gains(sol.state, cand)
        best = int(np.argmax(gains))  # first max == lowest id; pool is sorted
        v = int(cand[best])
        sol.add(v, int(groups[v]))
        keep = pool != v
        pool, pool_groups = pool[keep], pool_groups[keep]
    return sol


def greedy(oracle, groups, spec: FairnessSpec) -> Solution:
    """Greedy under a partition constraint: exactly ``k`` rounds, ``<= n*k`` oracle calls."""
    groups = np.asarray(groups, dtype=np.int64)
    spec.check_feasible(group_sizes(groups, spec.l))
    sol = Solution(oracle, groups, spec)
    return greedy_complete(sol, range(oracle.n))


def lazy_greedy(oracle, groups, spec: FairnessSpec) -> Solution:
    """Lazy-evaluation greedy. Same picks as ``greedy`` under the lowest-id tie rule.

    Stale gains are upper bounds by submodularity; an entry popped with a gain
    computed in the current round beats every other entry, including those
    tied with it that carry higher ids.
    """
    groups = np.asarray(groups, dtype=np.int64)
    spec.check_feasible(group_sizes(groups, spec.l))
    sol = Solution(oracle, groups, spec)
    budgets = spec.budgets
    items = [v for v in range(oracle.n) if budgets[groups[v]] > 0]
    if not items or spec.k == 0:
        return sol
    first = oracle.gains(sol.state, items)
    heap = [(-g, v, 0) for g, v in zip(first.tolist(), items)]
    heapq.heapify(heap)
    rnd = 0
    while len(sol) < spec.k and heap:
        neg, v, stamp = heapq.heappop(heap)
        g = int(groups[v])
        if not sol.has_room(g):
            continue
        if stamp == rnd:
            sol.add(v, g)
            rnd += 1
        else:
            heapq.heappush(heap, (-sol.gain(v), v, rnd))
    return sol


def unconstrained_greedy(oracle, k: int) -> Solution:
    """Plain cardinality-``k`` greedy: one group holding every item."""
    return greedy(oracle, np.zeros(oracle.n, dtype=np.int64), FairnessSpec((k,)))


def count_fair_sets(groups, spec: FairnessSpec) -> int:
    sizes = group_sizes(groups, spec.l)
    return math.prod(math.comb(int(s), b) for s, b in zip(sizes, spec.budgets))


def brute_force_opt(oracle, groups, spec: FairnessSpec, limit: int = BRUTE_FORCE_LIMIT) -> Solution:
    """Exact maximiser over all fair sets.

    Ties resolve to the lexicographically smallest sorted id sequence.
    """
    groups = np.asarray(groups, dtype=np.int64)
    spec.check_feasible(group_sizes(groups, spec.l))
    total = count_fair_sets(groups, spec)
    if total > limit:
        raise InstanceTooLargeError(f"{total} fair sets exceed the limit of {limit}")
    members = [np.flatnonzero(groups == i).tolist() for i in range(spec.l)]
    per_group = [itertools.combinations(members[i], b) for i, b in enumerate(spec.budgets)]
    best_val, best_set = -math.inf, None
    for parts in itertools.product(*per_group):
        s = tuple(sorted(itertools.chain.from_iterable(parts)))
        val = oracle.evaluate(s)
        if val > best_val or (val == best_val and s < best_set):
            best_val, best_set = val, s
    sol = Solution(oracle, groups, spec)
    for v in best_set:
        sol.add(v)
    return sol
