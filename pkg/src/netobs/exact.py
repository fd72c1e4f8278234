"""Closed-form 1-hop observability under a uniformly random compromised set.

Edge metrics depend only on ``n`` and ``n_c``; node metrics additionally need
the degree sequence. Binomial ratios are evaluated as telescoping products so
nothing overflows for ``n`` in the millions.
"""

from __future__ import annotations

import numpy as np

from .errors import MetricDomainError
from .graph import Graph


def _check_counts(n: int, n_c: int, upper: int) -> None:
    if n_c < 0 or n_c > upper:
        raise MetricDomainError(f"n_c must lie in 0..{upper} for n={n}, got {n_c}")


def survival_ratio(n: int, n_c: int, d: int) -> float:
    """Probability that none of ``d`` neighbours is compromised.

    Given that the node itself is not compromised, ``n_c`` nodes are drawn
    from the other ``n - 1``; this is ``C(n-1-d, n_c) / C(n-1, n_c)``.
    Returns 0 once ``d > n - 1 - n_c``.
    """
    if n < 1 or not 0 <= d <= n - 1:
        raise MetricDomainError(f"degree must lie in 0..{n - 1}, got {d}")
    _check_counts(n, n_c, n - 1)
    if d > n - 1 - n_c:
        return 0.0
    if d == 0 or n_c == 0:
        return 1.0
    # prod_{i<n_c} (n-1-d-i)/(n-1-i) == prod_{j<d} (n-1-n_c-j)/(n-1-j); take the shorter
    if n_c <= d:
        i = np.arange(n_c, dtype=np.float64)
        return float(np.prod((n - 1 - d - i) / (n - 1 - i)))
    j = np.arange(d, dtype=np.float64)
    return float(np.prod((n - 1 - n_c - j) / (n - 1 - j)))


def survival_ratios(n: int, n_c: int, degrees: np.ndarray) -> np.ndarray:
    """Vectorised :func:`survival_ratio` over an array of degrees."""
    degrees = np.asarray(degrees, dtype=np.int64)
    _check_counts(n, n_c, n - 1)
    if degrees.size and (degrees.min() < 0 or degrees.max() > n - 1):
        raise MetricDomainError("degrees must lie in 0..n-1")
    out = np.zeros(degrees.shape, dtype=np.float64)
    if n_c == 0:
        out[...] = 1.0
        return out
    # prod_{j<d} (n-1-n_c-j)/(n-1-j), cumulated once up to the largest live degree
    live = degrees <= n - 1 - n_c
    dmax = int(degrees[live].max()) if live.any() else 0
    j = np.arange(dmax, dtype=np.float64)
    table = np.concatenate([[1.0], np.cumprod((n - 1 - n_c - j) / (n - 1 - j))])
    out[live] = table[degrees[live]]
    return out


def exact_global_edge_obs(n: int, n_c: int) -> float:
    """Expected fraction of all edges with a compromised endpoint."""
    if n < 2:
        raise MetricDomainError("edge observability needs n >= 2")
    _check_counts(n, n_c, n)
    return 1.0 - ((n - n_c) / n) * ((n - 1 - n_c) / (n - 1))


def exact_local_edge_obs(n: int, n_c: int) -> float:
    """Expected fraction of a non-compromised node's edges that are observed.

    Assumes no isolated nodes. Undefined at ``n_c = n``.
    """
    if n < 2:
        raise MetricDomainError("edge observability needs n >= 2")
    _check_counts(n, n_c, n - 1)
    return n_c / (n - 1)


def exact_node_obs_prob(g: Graph, u: int, n_c: int) -> float:
    """Probability that non-compromised node ``u`` has a compromised neighbour."""
    if not 0 <= u < g.n:
        raise MetricDomainError(f"node {u} not in graph")
    return 1.0 - survival_ratio(g.n, n_c, int(g.degree[u]))


def exact_local_node_obs(g: Graph, n_c: int) -> float:
    """Average over nodes of the conditional probability of being observed."""
    n = g.n
    if n < 1:
        raise MetricDomainError("empty graph")
    _check_counts(n, n_c, n - 1)
    probs = 1.0 - survival_ratios(n, n_c, g.degree)
    # fixed node-order pairwise sum keeps results reproducible
    return float(np.sum(probs)) / n


def exact_global_node_obs(g: Graph, n_c: int) -> float:
    """Expected fraction of nodes that are compromised or observed."""
    n = g.n
    if n < 1:
        raise MetricDomainError("empty graph")
    _check_counts(n, n_c, n)
    if n_c == n:
        return 1.0
    return n_c / n + ((n - n_c) / n) * exact_local_node_obs(g, n_c)


def global_edge_auoc(n: int) -> float:
    """Area under the exact global edge curve over ``x in [0, 1]``."""
    return (2.0 * n / 3.0 - 0.5) / (n - 1)


def local_edge_auoc(n: int) -> float:
    """Area under the linear local edge formula extended to ``x in [0, 1]``."""
    return n / (2.0 * (n - 1))

