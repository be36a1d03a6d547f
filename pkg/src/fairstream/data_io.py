"""Loaders and generators for benchmark instances.

File formats (whitespace separated, ``#`` starts a comment line):

* edge list: ``src dst`` per line, nonnegative integer node ids;
* group file: ``node_id group_id`` per line, one line per node;
* feature file: header ``n d``, then ``n`` lines ``item_id f_1 .. f_d``, then
  one line ``user u_1 .. u_d``; all features nonnegative.

Node and group ids are densified (sorted order) on load; the original ids
are kept on the returned instance.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataFormatError
from .oracles import CoverageGroundSet, RecGroundSet


@dataclass(frozen=True)
class Instance:
    """A ground set plus its group map and the original ids behind dense ids."""

    ground: object
    groups: np.ndarray
    node_ids: np.ndarray
    group_ids: np.ndarray

    @property
    def n(self):
        return self.ground.n

    @property
    def l(self):
        return self.group_ids.size

    def group_sizes(self):
        return np.bincount(self.groups, minlength=self.l)


def _data_lines(path):
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if line and not line.startswith("#"):
                yield lineno, line.split()


def _nonneg_int(tok, path, lineno):
    try:
        val = int(tok)
    except ValueError:
        raise DataFormatError(f"expected an integer, got {tok!r}", path, lineno) from None
    if val < 0:
        raise DataFormatError(f"negative id {val}", path, lineno)
    return val


def read_edge_list(path) -> np.ndarray:
    edges = []
    for lineno, toks in _data_lines(path):
        if len(toks) != 2:
            raise DataFormatError(f"expected 'src dst', got {len(toks)} fields", path, lineno)
        edges.append((_nonneg_int(toks[0], path, lineno), _nonneg_int(toks[1], path, lineno)))
    return np.array(edges, dtype=np.int64).reshape(-1, 2)


def read_group_file(path) -> dict[int, int]:
    mapping = {}
    for lineno, toks in _data_lines(path):
        if len(toks) != 2:
            raise DataFormatError(f"expected 'node_id group_id', got {len(toks)} fields", path, lineno)
        node = _nonneg_int(toks[0], path, lineno)
        if node in mapping:
            raise DataFormatError(f"node {node} listed twice", path, lineno)
        mapping[node] = _nonneg_int(toks[1], path, lineno)
    return mapping


def _densify_groups(node_ids, mapping, path):
    missing = [int(u) for u in node_ids if int(u) not in mapping]
    if missing:
        raise DataFormatError(f"no group for node {missing[0]}"
                              + (f" (and {len(missing) - 1} more)" if len(missing) > 1 else ""), path)
    raw = np.array([mapping[int(u)] for u in node_ids], dtype=np.int64)
    group_ids, groups = np.unique(raw, return_inverse=True)
    return groups.astype(np.int64), group_ids


def load_coverage_instance(edge_path, group_path) -> Instance:
    """Directed edge list plus group file; an item covers its out-neighbours."""
    edges = read_edge_list(edge_path)
    if edges.size == 0:
        raise DataFormatError("graph has no edges", edge_path)
    mapping = read_group_file(group_path)
    node_ids = np.union1d(np.unique(edges), np.fromiter(mapping, dtype=np.int64))
    dense = np.searchsorted(node_ids, edges)
    ground = CoverageGroundSet.from_edges(node_ids.size, dense, directed=True)
    groups, group_ids = _densify_groups(node_ids, mapping, group_path)
    return Instance(ground, groups, node_ids, group_ids)


def load_rec_instance(feature_path, group_path=None, lam: float = 0.75) -> Instance:
    """Feature file (plus optional group file; default: a single group)."""
    rows = {}
    user = None
    header = None
    for lineno, toks in _data_lines(feature_path):
        if header is None:
            if len(toks) != 2:
                raise DataFormatError("header must be 'n d'", feature_path, lineno)
            header = (_nonneg_int(toks[0], feature_path, lineno), _nonneg_int(toks[1], feature_path, lineno))
            continue
        n, d = header
        if len(toks) != d + 1:
            raise DataFormatError(f"expected {d} features, got {len(toks) - 1}", feature_path, lineno)
        try:
            vec = np.array([float(t) for t in toks[1:]])
        except ValueError:
            raise DataFormatError("non-numeric feature", feature_path, lineno) from None
        if not np.isfinite(vec).all():
            raise DataFormatError("non-finite feature", feature_path, lineno)
        if (vec < 0).any():
            raise DataFormatError(f"negative feature {vec[vec < 0][0]:g}", feature_path, lineno)
        if toks[0] == "user":
            if user is not None:
                raise DataFormatError("second user line", feature_path, lineno)
            user = vec
            continue
        item = _nonneg_int(toks[0], feature_path, lineno)
        if item in rows:
            raise DataFormatError(f"item {item} listed twice", feature_path, lineno)
        rows[item] = vec
    if header is None:
        raise DataFormatError("empty feature file", feature_path)
    if user is None:
        raise DataFormatError("missing 'user' line", feature_path)
    if len(rows) != header[0]:
        raise DataFormatError(f"header says {header[0]} items, found {len(rows)}", feature_path)
    node_ids = np.array(sorted(rows), dtype=np.int64)
    X = np.array([rows[i] for i in node_ids.tolist()]).reshape(len(rows), header[1])
    ground = RecGroundSet(X, user, lam=lam, ids=node_ids)
    if group_path is None:
        groups, group_ids = np.zeros(node_ids.size, dtype=np.int64), np.zeros(1, dtype=np.int64)
    else:
        groups, group_ids = _densify_groups(node_ids, read_group_file(group_path), group_path)
    return Instance(ground, groups, node_ids, group_ids)


# ---------------------------------------------------------------------------
# writers
# ---------------------------------------------------------------------------

def write_edge_list(ground: CoverageGroundSet, path, node_ids=None):
    edges = ground.edges()
    if node_ids is not None:
        edges = np.asarray(node_ids)[edges]
    with open(path, "w") as fh:
        fh.write(f"# n={ground.n} directed_pairs={len(edges)}\n")
        fh.writelines(f"{u} {w}\n" for u, w in edges.tolist())


def write_group_file(groups, path, node_ids=None):
    node_ids = np.arange(len(groups)) if node_ids is None else np.asarray(node_ids)
    with open(path, "w") as fh:
        fh.writelines(f"{u} {g}\n" for u, g in zip(node_ids.tolist(), np.asarray(groups).tolist()))


def write_feature_file(ground: RecGroundSet, path):
    ids = ground.ids if ground.ids is not None else np.arange(ground.n)
    with open(path, "w") as fh:
        fh.write(f"{ground.n} {ground.d}\n")
        for i, row in zip(ids.tolist(), ground.item_vectors):
            fh.write(f"{i} " + " ".join(repr(float(x)) for x in row) + "\n")
        fh.write("user " + " ".join(repr(float(x)) for x in ground.user_vector) + "\n")


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def ba_edges(n: int, seed=None) -> np.ndarray:
    """Undirected preferential-attachment graph with exactly ``n`` nodes and ``n`` edges.

    Starts from the edge 0-1, attaches each new node to one existing node
    chosen with probability proportional to degree (``n - 1`` edges), then
    adds one more edge from a uniform node to a degree-proportional node,
    avoiding self-loops and duplicates.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    rng = np.random.default_rng(seed)
    # endpoint list: node u appears deg(u) times
    ends = np.empty(2 * n, dtype=np.int64)
    ends[0], ends[1] = 0, 1
    edges = [(0, 1)]
    size = 2
    for t in range(2, n):
        w = int(ends[rng.integers(size)])
        edges.append((w, t))
        ends[size], ends[size + 1] = t, w
        size += 2
    present = {(min(a, b), max(a, b)) for a, b in edges}
    while len(edges) < n:
        a = int(rng.integers(n))
        b = int(ends[rng.integers(size)])
        key = (min(a, b), max(a, b))
        if a == b or key in present:
            continue
        present.add(key)
        edges.append(key)
        ends[size], ends[size + 1] = a, b
        size += 2
    return np.array(edges, dtype=np.int64)


def gen_ba(n: int, seed=None) -> CoverageGroundSet:
    """BA graph as a coverage ground set; each node covers its neighbours."""
    return CoverageGroundSet.from_edges(n, ba_edges(n, seed), directed=False)


def zipf_sizes(n: int, l: int, s: float) -> np.ndarray:
    """Group sizes proportional to ``rank**-s``, summing to ``n``, non-increasing.

    Largest-remainder rounding; any group left empty takes one node from
    the currently largest group.
    """
    if l < 1:
        raise ValueError("l must be at least 1")
    if s <= 0:
        raise ValueError("s must be positive")
    if n < l:
        raise ValueError(f"cannot split {n} nodes into {l} nonempty groups")
    w = np.arange(1, l + 1, dtype=float) ** -s
    quota = n * w / w.sum()
    sizes = np.floor(quota).astype(np.int64)
    rem = quota - sizes
    spare = n - int(sizes.sum())
    order = np.lexsort((np.arange(l), -rem))
    sizes[order[:spare]] += 1
    for i in np.flatnonzero(sizes == 0):
        donor = int(np.argmax(sizes))
        sizes[donor] -= 1
        sizes[i] += 1
    return np.sort(sizes)[::-1].copy()


def zipf_groups(n: int, l: int, s: float = 2.0, seed=None) -> np.ndarray:
    """Random partition of ``0..n-1`` into ``l`` Zipf-sized groups (group 0 largest)."""
    sizes = zipf_sizes(n, l, s)
    perm = np.random.default_rng(seed).permutation(n)
    groups = np.empty(n, dtype=np.int64)
    groups[perm] = np.repeat(np.arange(l), sizes)
    return groups


def synthetic_instance(n: int, l: int = 10, s: float = 2.0, seed=None) -> Instance:
    """BA graph with Zipf groups. Graph and partition use independent seeds."""
    ss = np.random.SeedSequence(seed)
    g_seed, p_seed = ss.spawn(2)
    ground = gen_ba(n, g_seed)
    groups = zipf_groups(n, l, s, p_seed)
    return Instance(ground, groups, np.arange(n, dtype=np.int64), np.arange(l, dtype=np.int64))


def save_coverage_instance(inst: Instance, out_dir) -> tuple[Path, Path]:
    out = Path(out_dir)
    os.makedirs(out, exist_ok=True)
    edge_path, group_path = out / "edges.txt", out / "groups.txt"
    write_edge_list(inst.ground, edge_path, inst.node_ids)
    write_group_file(inst.group_ids[inst.groups], group_path, inst.node_ids)
    return edge_path, group_path
