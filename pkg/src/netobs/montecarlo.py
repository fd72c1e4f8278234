"""Monte-Carlo and brute-force estimation of observability at any hop count.

Two independent evaluation paths exist on purpose:

* :func:`realized_metric` evaluates one compromised set with a plain
  multi-source BFS. :func:`brute_force_metric` averages it over every subset
  and serves as the oracle for small graphs.
* :func:`mc_estimate` evaluates many trials at once, propagating reachability
  through the sparse adjacency matrix one hop at a time.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .errors import BudgetError, InputError, MetricDomainError
from .graph import Graph, bfs_distances

TARGETS = ("edge", "node")
LEVELS = ("global", "local")

_MASK64 = (1 << 64) - 1
# trials per evaluation batch is capped so an (n x batch) float32 block stays near 16 MB
_BATCH_CELLS = 1 << 22
_MAX_BATCH = 256


@dataclass(frozen=True)
class Scope:
    """Which metric to evaluate and how many hops the attacker sees."""

    target: str = "edge"
    level: str = "global"
    hops: int = 1

    def __post_init__(self):
        if self.target not in TARGETS:
            raise InputError(f"target must be one of {TARGETS}, got {self.target!r}")
        if self.level not in LEVELS:
            raise InputError(f"level must be one of {LEVELS}, got {self.level!r}")
        if int(self.hops) != self.hops or self.hops < 1:
            raise InputError(f"hops must be an integer >= 1, got {self.hops!r}")

    @property
    def is_local(self) -> bool:
        return self.level == "local"

    @property
    def name(self) -> str:
        return f"{self.level}-{self.target}"

    def __str__(self) -> str:
        return f"{self.name}@{self.hops}"

    @classmethod
    def parse(cls, text: str) -> "Scope":
        """Parse ``"global-edge"`` or ``"local-node@2"``."""
        name, _, hops = text.partition("@")
        level, _, target = name.partition("-")
        return cls(target=target, level=level, hops=int(hops) if hops else 1)

    def max_compromised(self, n: int) -> int:
        return n - 1 if self.is_local else n


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    trials: int


def mix64(seed: int, index: int) -> int:
    """SplitMix64 finalizer applied to ``seed + (index + 1) * golden``.

    Gives every trial its own well-separated 64-bit seed, so trials can be
    evaluated in any order or on any worker.
    """
    z = (int(seed) + (int(index) + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def sample_compromised(n: int, n_c: int, seed: int) -> np.ndarray:
    """Uniformly random size-``n_c`` subset of ``0..n-1`` as a sorted id array."""
    if n < 0 or not 0 <= n_c <= n:
        raise InputError(f"cannot draw {n_c} nodes out of {n}")
    if n_c == n:
        return np.arange(n, dtype=np.int64)
    rng = np.random.Generator(np.random.PCG64(int(seed) & _MASK64))
    return np.sort(rng.choice(n, size=n_c, replace=False, shuffle=False).astype(np.int64))


def _check_scope_args(g: Graph, scope: Scope, n_c: int) -> None:
    top = scope.max_compromised(g.n)
    if not 0 <= n_c <= top:
        if scope.is_local and n_c == g.n:
            raise MetricDomainError(f"{scope.name} is undefined when every node is compromised")
        raise InputError(f"n_c must lie in 0..{top} for {scope.name} on n={g.n}, got {n_c}")
    if scope.target == "edge" and g.num_edges == 0:
        raise MetricDomainError("edge observability is undefined on a graph without edges")


def realized_metric(g: Graph, compromised: Iterable[int] | np.ndarray, scope: Scope) -> float:
    """Value of the metric for one concrete compromised set.

    * global edge: ``|E_o^k| / |E|``
    * global node: ``(n_c + |V_o^k|) / n``
    * local edge: mean over non-compromised nodes with at least one edge of
      the observed share of their incident edges
    * local node: share of non-compromised nodes that are observed
    """
    comp = np.zeros(g.n, dtype=bool)
    ids = np.fromiter((int(x) for x in compromised), dtype=np.int64) \
        if not isinstance(compromised, np.ndarray) else compromised.astype(np.int64).ravel()
    if ids.size and (ids.min() < 0 or ids.max() >= g.n):
        raise InputError(f"compromised ids must lie in 0..{g.n - 1}")
    comp[ids] = True
    n_c = int(comp.sum())
    _check_scope_args(g, scope, n_c)
    k = scope.hops

    if scope.target == "node":
        observed = int(np.count_nonzero(bfs_distances(g, comp, k) > 0))
        if scope.is_local:
            return observed / (g.n - n_c)
        return (n_c + observed) / g.n

    near = bfs_distances(g, comp, k - 1) >= 0
    e = g.edges
    seen = near[e[:, 0]] | near[e[:, 1]]
    if not scope.is_local:
        return int(seen.sum()) / g.num_edges
    obs_deg = np.bincount(e[seen, 0], minlength=g.n) + np.bincount(e[seen, 1], minlength=g.n)
    keep = ~comp & (g.degree > 0)
    if not keep.any():
        raise MetricDomainError("no non-compromised node has an edge")
    return float(np.mean(obs_deg[keep] / g.degree[keep]))


def _batch_size(g: Graph) -> int:
    return max(1, min(_MAX_BATCH, _BATCH_CELLS // max(g.n, g.num_edges, 1)))


def _batch_values(g: Graph, scope: Scope, n_c: int, seeds: list[int]) -> np.ndarray:
    n, t = g.n, len(seeds)
    comp = np.zeros((n, t), dtype=bool)
    for j, s in enumerate(seeds):
        comp[sample_compromised(n, n_c, s), j] = True
    if n_c == 0 and scope.target == "edge":
        return np.zeros(t)

    adj = g.adjacency()
    depth = scope.hops if scope.target == "node" else scope.hops - 1
    reach = comp
    for _ in range(depth):
        # one hop of reachability for every trial at once
        reach = reach | (adj @ reach.astype(np.float32) > 0)

    if scope.target == "node":
        observed = np.count_nonzero(reach, axis=0) - n_c
        if scope.is_local:
            return observed / (n - n_c)
        return (n_c + observed) / n

    deg = g.degree
    near_nbrs = np.asarray(adj @ reach.astype(np.float32)).astype(np.int64)
    if not scope.is_local:
        # an edge escapes observation only when neither endpoint is near
        hidden_twice = np.where(reach, 0, deg[:, None] - near_nbrs).sum(axis=0)
        return (g.num_edges - hidden_twice // 2) / g.num_edges
    obs_deg = np.where(reach, deg[:, None], near_nbrs)
    keep = ~comp & (deg[:, None] > 0)
    counts = keep.sum(axis=0)
    if (counts == 0).any():
        raise MetricDomainError("no non-compromised node has an edge")
    safe_deg = np.maximum(deg, 1)[:, None]
    ratios = np.where(keep, obs_deg / safe_deg, 0.0)
    return ratios.sum(axis=0) / counts


def mc_values(g: Graph, scope: Scope, n_c: int, trials: int, seed: int, workers: int = 1) -> np.ndarray:
    """Per-trial metric values, in trial order.

    Trial ``t`` draws its compromised set from ``mix64(seed, t)``. Batches
    have a size fixed by the graph alone, so the output does not depend on
    ``workers``.
    """
    if trials < 1:
        raise InputError("trials must be >= 1")
    _check_scope_args(g, scope, n_c)
    g.adjacency()  # build the shared cache before any worker touches it
    size = _batch_size(g)
    batches = [list(range(i, min(i + size, trials))) for i in range(0, trials, size)]

    def run(batch):
        return _batch_values(g, scope, n_c, [mix64(seed, t) for t in batch])

    if workers > 1 and len(batches) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, batches))
    else:
        parts = [run(b) for b in batches]
    return np.concatenate(parts).astype(np.float64)


def summarize(values: np.ndarray) -> McEstimate:
    values = np.asarray(values, dtype=np.float64)
    t = len(values)
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(t)) if t > 1 else 0.0
    return McEstimate(mean=mean, stderr=stderr, trials=t)


def mc_estimate(g: Graph, scope: Scope, n_c: int, trials: int = 500, seed: int = 0,
                workers: int = 1) -> McEstimate:
    """Mean and standard error of the metric over ``trials`` random compromised sets."""
    return summarize(mc_values(g, scope, n_c, trials, seed, workers))


def brute_force_metric(g: Graph, scope: Scope, n_c: int, budget: int = 10**6) -> float:
    """Exact expectation of :func:`realized_metric` over all size-``n_c`` subsets."""
    _check_scope_args(g, scope, n_c)
    count = math.comb(g.n, n_c)
    if count > budget:
        raise BudgetError(f"C({g.n}, {n_c}) = {count} subsets exceeds the budget of {budget}")
    values = [realized_metric(g, np.array(sub, dtype=np.int64), scope)
              for sub in combinations(range(g.n), n_c)]
    return math.fsum(values) / count
