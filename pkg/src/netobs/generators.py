"""Random graph families used for the synthetic experiments.

All generators take an explicit 64-bit seed and return a :class:`Graph`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .graph import Graph, from_edge_list

log = logging.getLogger(__name__)

FAMILIES = ("complete", "er", "ba", "ws")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & ((1 << 64) - 1)))


def _pair_from_index(idx: np.ndarray, n: int) -> np.ndarray:
    """Map linear indices over pairs ``i < j`` (row-major) back to ``(i, j)``."""
    rows = np.arange(n, dtype=np.int64)
    starts = rows * n - rows * (rows + 1) // 2
    i = np.searchsorted(starts, idx, side="right") - 1
    j = idx - starts[i] + i + 1
    return np.column_stack([i, j])


def gen_complete(n: int) -> Graph:
    if n < 1:
        raise InputError("complete graph needs n >= 1")
    i, j = np.triu_indices(n, k=1)
    return from_edge_list(n, np.column_stack([i, j]))


def gen_er(n: int, p: float, seed: int = 0) -> Graph:
    """G(n, p): every pair present independently with probability ``p``.

    The edge count is drawn from Binomial(N, p), N = n(n-1)/2, and that many
    distinct pairs are then chosen uniformly, which is the same distribution
    without touching all N pairs.
    """
    if n < 1:
        raise InputError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise InputError(f"p must lie in [0, 1], got {p}")
    rng = _rng(seed)
    pairs = n * (n - 1) // 2
    m = int(rng.binomial(pairs, p)) if pairs else 0
    if m == 0:
        return from_edge_list(n, [])
    chosen = np.sort(rng.choice(pairs, size=m, replace=False, shuffle=False))
    return from_edge_list(n, _pair_from_index(chosen, n))


def gen_ba(n: int, m: int, seed: int = 0) -> Graph:
    """Preferential attachment starting from ``m`` isolated nodes.

    Node ``t >= m`` links to ``m`` distinct earlier nodes picked with
    probability proportional to degree (uniformly while all degrees are 0).
    The result has exactly ``m (n - m)`` edges.
    """
    if not 1 <= m < n:
        raise InputError(f"BA needs 1 <= m < n, got m={m}, n={n}")
    rng = _rng(seed)
    # each endpoint appears once per incident edge; sampling from it is degree-proportional
    endpoints = np.empty(2 * m * (n - m), dtype=np.int64)
    filled = 0
    edges = np.empty((m * (n - m), 2), dtype=np.int64)
    e = 0
    for t in range(m, n):
        if filled == 0:
            targets = np.arange(m)
        else:
            chosen: set[int] = set()
            while len(chosen) < m:
                draws = endpoints[rng.integers(0, filled, size=2 * (m - len(chosen)))]
                for d in draws.tolist():
                    chosen.add(d)
                    if len(chosen) == m:
                        break
            targets = np.fromiter(chosen, dtype=np.int64, count=m)
        edges[e:e + m, 0] = t
        edges[e:e + m, 1] = targets
        e += m
        endpoints[filled:filled + m] = targets
        endpoints[filled + m:filled + 2 * m] = t
        filled += 2 * m
    return from_edge_list(n, edges)


def even_neighbors(k: int) -> int:
    """Ring lattices need an even neighbour count; odd ``k`` rounds down."""
    return k - (k % 2)


def gen_ws(n: int, k: int, p: float, seed: int = 0) -> Graph:
    """Watts-Strogatz small world.

    Each node starts linked to its ``k`` nearest ring neighbours (``k`` rounded
    down to even). Every lattice edge ``(u, u+j)`` is then rewired with
    probability ``p`` to ``(u, w)`` for a uniform ``w`` that is neither ``u``
    nor already adjacent to ``u``. Rewiring never changes the edge count.
    """
    if not 2 <= k < n:
        raise InputError(f"WS needs 2 <= k < n, got k={k}, n={n}")
    if not 0.0 <= p <= 1.0:
        raise InputError(f"p must lie in [0, 1], got {p}")
    k_even = even_neighbors(k)
    if k_even != k:
        log.info("watts-strogatz: odd k=%d normalized to %d", k, k_even)
    rng = _rng(seed)
    adj: list[set[int]] = [set() for _ in range(n)]
    for u in range(n):
        for j in range(1, k_even // 2 + 1):
            v = (u + j) % n
            adj[u].add(v)
            adj[v].add(u)
    # same sweep order as the classic construction: by offset, then by node
    for j in range(1, k_even // 2 + 1):
        coins = rng.random(n)
        for u in range(n):
            v = (u + j) % n
            if coins[u] >= p or v not in adj[u]:
                continue
            if len(adj[u]) >= n - 1:
                continue
            while True:
                w = int(rng.integers(0, n))
                if w != u and w not in adj[u]:
                    break
            adj[u].discard(v)
            adj[v].discard(u)
            adj[u].add(w)
            adj[w].add(u)
    pairs = [(u, v) for u in range(n) for v in adj[u] if u < v]
    return from_edge_list(n, pairs)


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters for one graph family; unused fields are ``None``."""

    family: str
    n: int
    p: float | None = None
    m: int | None = None
    k: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.n < 1:
            raise InputError("n must be >= 1")
        if self.p is not None and not 0.0 <= self.p <= 1.0:
            raise InputError(f"p must lie in [0, 1], got {self.p}")
        if self.family == "ba" and (self.m is None or not 1 <= self.m < self.n):
            raise InputError("ba needs 1 <= m < n")
        if self.family == "ws" and (self.k is None or not 2 <= self.k < self.n):
            raise InputError("ws needs 2 <= k < n")
        if self.family in ("er", "ws") and self.p is None:
            raise InputError(f"{self.family} needs p")

    @property
    def k_even(self) -> int | None:
        return None if self.k is None else even_neighbors(self.k)

    def expected_density(self) -> float:
        n = self.n
        if n < 2:
            return 0.0
        if self.family == "complete":
            return 1.0
        if self.family == "er":
            return float(self.p)
        if self.family == "ba":
            return 2.0 * self.m * (n - self.m) / (n * (n - 1))
        return self.k_even / (n - 1)

    def params(self) -> dict:
        out = {"family": self.family, "n": self.n, "seed": self.seed}
        if self.p is not None:
            out["p"] = self.p
        if self.m is not None:
            out["m"] = self.m
        if self.k is not None:
            out["k"] = self.k
            out["k_even"] = self.k_even
        return out

    def build(self) -> Graph:
        if self.family == "complete":
            return gen_complete(self.n)
        if self.family == "er":
            return gen_er(self.n, self.p, self.seed)
        if self.family == "ba":
            return gen_ba(self.n, self.m, self.seed)
        return gen_ws(self.n, self.k, self.p, self.seed)


def params_for_density(family: str, n: int, d: float, seed: int = 0,
                       rewire_p: float = 0.2) -> GeneratorSpec:
    """Pick the family parameter that lands near density ``d``.

    er: ``p = d``. ba: ``m = round(d n / 2)``, at least 1. ws: ``k`` is the
    even number nearest ``d (n - 1)``, at least 2, rewired with ``rewire_p``.
    """
    if not 0.0 < d <= 1.0:
        raise InputError(f"density must lie in (0, 1], got {d}")
    if family == "complete":
        return GeneratorSpec("complete", n, seed=seed)
    if family == "er":
        return GeneratorSpec("er", n, p=d, seed=seed)
    if family == "ba":
        m = max(1, int(round(d * n / 2)))
        if m >= n:
            raise InputError(f"density {d} is out of reach for BA on {n} nodes")
        return GeneratorSpec("ba", n, m=m, seed=seed)
    if family == "ws":
        if d < 2.0 / n:
            raise InputError(f"density {d} is below the WS minimum 2/n = {2.0 / n:.4g}")
        k = max(2, 2 * int(round(d * (n - 1) / 2)))
        k = min(k, even_neighbors(n - 1))
        if k < 2:
            raise InputError(f"WS needs at least 4 nodes, got {n}")
        return GeneratorSpec("ws", n, k=k, p=rewire_p, seed=seed)
    raise InputError(f"family must be one of {FAMILIES}, got {family!r}")
