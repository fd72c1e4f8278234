"""Immutable undirected simple graphs and the traversal primitives used by the
observability metrics.

Nodes are the dense integers ``0..n-1``. Edges are stored once, as ``(u, v)``
with ``u < v``, alongside a CSR adjacency so that neighbourhood queries and
multi-source breadth-first search stay ``O(|E|)`` on million-node graphs.
"""

from __future__ import annotations

import io
import os
from typing import Iterable, Iterator, TextIO

import numpy as np
import scipy.sparse as sp

from .errors import InputError


class Graph:
    """Undirected simple graph over nodes ``0..n-1``.

    Instances are read-only after construction; the underlying arrays have
    their ``writeable`` flag cleared so they can be shared across threads.
    """

    __slots__ = ("_n", "_edges", "_indptr", "_indices", "_degree", "_adj")

    def __init__(self, n: int, edges: np.ndarray):
        # ``edges`` must already be canonical: unique rows, u < v, sorted.
        self._n = int(n)
        self._edges = _readonly(np.asarray(edges, dtype=np.int64).reshape(-1, 2))
        m = len(self._edges)
        u, v = self._edges[:, 0], self._edges[:, 1]
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        order = np.lexsort((dst, src))
        self._indices = _readonly(dst[order])
        counts = np.bincount(src, minlength=self._n) if m else np.zeros(self._n, np.int64)
        indptr = np.zeros(self._n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        self._indptr = _readonly(indptr)
        self._degree = _readonly(counts.astype(np.int64))
        self._adj = None

    @property
    def n(self) -> int:
        return self._n

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> np.ndarray:
        """``(|E|, 2)`` array of canonical edges, ``u < v``, lexicographically sorted."""
        return self._edges

    @property
    def degree(self) -> np.ndarray:
        return self._degree

    @property
    def indptr(self) -> np.ndarray:
        return self._indptr

    @property
    def indices(self) -> np.ndarray:
        return self._indices

    def neighbors(self, u: int) -> np.ndarray:
        return self._indices[self._indptr[u]:self._indptr[u + 1]]

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset((int(a), int(b)) for a, b in self._edges)

    def adjacency(self) -> sp.csr_matrix:
        """Symmetric 0/1 adjacency as a float32 CSR matrix (cached)."""
        if self._adj is None:
            data = np.ones(len(self._indices), dtype=np.float32)
            self._adj = sp.csr_matrix((data, self._indices, self._indptr), shape=(self._n, self._n))
        return self._adj

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, edges={self.num_edges})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and np.array_equal(self._edges, other._edges)

    def __hash__(self) -> int:
        return hash((self._n, self._edges.tobytes()))


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


def from_edge_list(n: int, pairs: Iterable[tuple[int, int]] | np.ndarray) -> Graph:
    """Build a graph on ``n`` nodes from id pairs.

    Duplicate pairs (in either orientation) collapse to one edge.

    Raises:
        InputError: if an id is outside ``0..n-1`` or a pair is a self-loop.
    """
    if n < 0:
        raise InputError(f"node count must be non-negative, got {n}")
    arr = np.asarray(list(pairs) if not isinstance(pairs, np.ndarray) else pairs, dtype=np.int64)
    if arr.size == 0:
        return Graph(n, np.empty((0, 2), dtype=np.int64))
    arr = arr.reshape(-1, 2)
    bad = (arr < 0) | (arr >= n)
    if bad.any():
        row = int(np.flatnonzero(bad.any(axis=1))[0])
        raise InputError(f"edge {tuple(arr[row])} has an endpoint outside 0..{n - 1}")
    loops = arr[:, 0] == arr[:, 1]
    if loops.any():
        u = int(arr[np.flatnonzero(loops)[0], 0])
        raise InputError(f"self-loop ({u}, {u}) is not allowed")
    canon = np.sort(arr, axis=1)
    canon = np.unique(canon, axis=0)
    return Graph(n, canon)


def density(g: Graph) -> float:
    """Simple-graph density ``2|E| / (n(n-1))``."""
    if g.n < 2:
        raise InputError("density is undefined for fewer than 2 nodes")
    return 2.0 * g.num_edges / (g.n * (g.n - 1))


def _as_index_array(g: Graph, nodes: Iterable[int] | np.ndarray) -> np.ndarray:
    if isinstance(nodes, np.ndarray) and nodes.dtype == bool:
        if nodes.shape != (g.n,):
            raise InputError("boolean node mask must have length n")
        return np.flatnonzero(nodes)
    idx = np.fromiter((int(x) for x in nodes), dtype=np.int64) if not isinstance(nodes, np.ndarray) \
        else nodes.astype(np.int64, copy=False).ravel()
    if idx.size and (idx.min() < 0 or idx.max() >= g.n):
        raise InputError(f"node ids must lie in 0..{g.n - 1}")
    return idx


def bfs_distances(g: Graph, sources, max_depth: int) -> np.ndarray:
    """Multi-source BFS distances, capped at ``max_depth``.

    Returns an int array of length ``n`` holding the distance to the nearest
    source, or ``-1`` for nodes farther than ``max_depth`` (or unreachable).
    """
    if max_depth < 0:
        raise InputError("max_depth must be >= 0")
    dist = np.full(g.n, -1, dtype=np.int64)
    frontier = np.unique(_as_index_array(g, sources))
    dist[frontier] = 0
    indptr, indices = g.indptr, g.indices
    depth = 0
    while frontier.size and depth < max_depth:
        starts, stops = indptr[frontier], indptr[frontier + 1]
        lengths = stops - starts
        if lengths.sum() == 0:
            break
        # gather all neighbour slices of the frontier in one shot
        offsets = np.repeat(starts - np.cumsum(lengths) + lengths, lengths) + np.arange(lengths.sum())
        nbrs = indices[offsets]
        nbrs = np.unique(nbrs[dist[nbrs] < 0])
        depth += 1
        dist[nbrs] = depth
        frontier = nbrs
    return dist


def khop_nodes(g: Graph, sources, k: int) -> frozenset[int]:
    """Non-source nodes within ``k`` hops of at least one source.

    ``k = 0`` gives the empty set since sources themselves are excluded.
    """
    if k < 0:
        raise InputError("hop count must be >= 0")
    dist = bfs_distances(g, sources, k)
    return frozenset(np.flatnonzero(dist > 0).tolist())


def observed_edge_mask(g: Graph, compromised, k: int) -> np.ndarray:
    """Boolean mask over ``g.edges`` of edges with an endpoint within ``k-1`` hops."""
    if k < 1:
        raise InputError("hop count for edge observation must be >= 1")
    near = bfs_distances(g, compromised, k - 1) >= 0
    e = g.edges
    return near[e[:, 0]] | near[e[:, 1]]


def observed_edges(g: Graph, compromised, k: int) -> frozenset[tuple[int, int]]:
    """Edges with at least one endpoint within ``k-1`` hops of a compromised node."""
    mask = observed_edge_mask(g, compromised, k)
    return frozenset((int(a), int(b)) for a, b in g.edges[mask])


def local_clustering(g: Graph) -> np.ndarray:
    """Per-node clustering coefficient; nodes of degree < 2 get 0."""
    adj = g.adjacency()
    # triangles through u = (A^3)_{uu} / 2 = sum of (A @ A) * A over row u, halved
    paths2 = adj @ adj
    tri = np.asarray(paths2.multiply(adj).sum(axis=1)).ravel() / 2.0
    deg = g.degree.astype(np.float64)
    pairs = deg * (deg - 1) / 2.0
    out = np.zeros(g.n, dtype=np.float64)
    ok = pairs > 0
    out[ok] = tri[ok] / pairs[ok]
    return out


def avg_clustering(g: Graph) -> float:
    """Mean local clustering coefficient over all nodes."""
    if g.n == 0:
        raise InputError("average clustering is undefined for an empty graph")
    return float(local_clustering(g).mean())


def iter_edge_lines(lines: Iterable[str]) -> Iterator[tuple[int, int]]:
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InputError(f"line {lineno}: expected two ids, got {line!r}")
        try:
            yield int(parts[0]), int(parts[1])
        except ValueError:
            raise InputError(f"line {lineno}: ids must be decimal integers, got {line!r}") from None


def read_edge_list(source: str | os.PathLike | TextIO, n: int | None = None) -> Graph:
    """Read the whitespace-separated edge-list format.

    ``n`` defaults to one more than the largest id seen. A ``# nodes: N``
    comment, as written by :func:`write_edge_list`, also fixes ``n`` so that
    trailing isolated nodes survive a round trip.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = source.read()
    lines = text.splitlines()
    for line in lines:
        s = line.strip()
        if s.startswith("#") and s[1:].strip().lower().startswith("nodes:") and n is None:
            n = int(s.split(":", 1)[1])
    pairs = list(iter_edge_lines(lines))
    if n is None:
        n = 1 + max((max(p) for p in pairs), default=-1)
    return from_edge_list(n, pairs)


def write_edge_list(g: Graph, dest: str | os.PathLike | TextIO) -> None:
    buf = io.StringIO()
    buf.write(f"# nodes: {g.n}\n")
    for a, b in g.edges:
        buf.write(f"{a} {b}\n")
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(buf.getvalue())
    else:
        dest.write(buf.getvalue())
