"""Observability curves and the area under them (AUOC)."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import exact
from .errors import InputError
from .graph import Graph
from .montecarlo import Scope, mc_estimate, mix64

DEFAULT_GRID_POINTS = 21


@dataclass(frozen=True)
class CurvePoint:
    x: float
    value: float
    stderr: float = 0.0
    n_c: int | None = None


@dataclass
class ObservabilityCurve:
    points: list[CurvePoint]
    scope: Scope | None = None
    label: str = ""
    method: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        xs = [p.x for p in self.points]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise InputError("curve x values must be strictly increasing")

    @property
    def x(self) -> np.ndarray:
        return np.array([p.x for p in self.points], dtype=np.float64)

    @property
    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.points], dtype=np.float64)

    @property
    def stderrs(self) -> np.ndarray:
        return np.array([p.stderr for p in self.points], dtype=np.float64)

    def auoc(self) -> float:
        return auoc(self)

    def auoc_stderr(self) -> float:
        return auoc_stderr(self)


def _round_half_up(v: float) -> int:
    return int(math.floor(v + 0.5))


def default_grid(n: int, points: int = DEFAULT_GRID_POINTS, local: bool = False) -> list[int]:
    """Evenly spaced compromised counts from 0 to ``n``, plus ``n_c = 1``.

    The single-node point is where curves rise fastest, and without it the
    trapezoid cuts that corner. Local curves also get ``n - 1``, the last
    count where the metric is defined; the closing count ``n`` is kept and
    evaluated as the limit 1.
    """
    if n < 1:
        raise InputError("grid needs n >= 1")
    if points < 2:
        raise InputError("grid needs at least 2 points")
    grid = {_round_half_up(f * n) for f in np.linspace(0.0, 1.0, points)}
    grid.add(1)
    if local and n >= 2:
        grid.add(n - 1)
    return sorted(grid)


def curve_grid(g: Graph, scope: Scope, points: int = DEFAULT_GRID_POINTS) -> list[int]:
    """:func:`default_grid` trimmed to counts where ``scope`` is always defined.

    Local edge-observability needs a surviving node with an edge, which is
    only guaranteed while ``n_c <= n - 1 - isolated``. Counts beyond that
    are dropped, except the closing count ``n``.
    """
    grid = default_grid(g.n, points, local=scope.is_local)
    if scope.is_local and scope.target == "edge":
        top = g.n - 1 - int(np.count_nonzero(g.degree == 0))
        grid = [c for c in grid if c <= top or c == g.n]
        if top >= 1 and top not in grid:
            grid = sorted(grid + [top])
    return grid


def full_grid(n: int) -> list[int]:
    return list(range(n + 1))


def _closed_form(g: Graph, scope: Scope, n_c: int) -> float:
    if scope.target == "edge":
        if scope.is_local:
            return exact.exact_local_edge_obs(g.n, n_c)
        return exact.exact_global_edge_obs(g.n, n_c)
    if scope.is_local:
        return exact.exact_local_node_obs(g, n_c)
    return exact.exact_global_node_obs(g, n_c)


def build_curve(g: Graph, scope: Scope, grid: list[int] | None = None, trials: int = 500,
                seed: int = 0, label: str = "", method: str = "auto",
                workers: int = 1) -> ObservabilityCurve:
    """Evaluate ``scope`` at each compromised count in ``grid``.

    ``method="auto"`` uses closed forms for 1-hop edge scopes and Monte-Carlo
    otherwise; ``"exact"`` allows closed forms for 1-hop node scopes too;
    ``"mc"`` always samples. Each grid point samples with a seed derived from
    ``(seed, n_c)``, so curves for different hop counts share compromised
    sets point by point.

    For local scopes a grid count of ``n`` (everyone compromised) yields the
    closing point ``(1, 1)``.
    """
    if method not in ("auto", "exact", "mc"):
        raise InputError(f"unknown method {method!r}")
    if grid is None:
        grid = curve_grid(g, scope)
    grid = [int(c) for c in grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InputError("grid must be strictly increasing")
    use_exact = scope.hops == 1 and (method == "exact" or (method == "auto" and scope.target == "edge"))
    if method == "exact" and scope.hops != 1:
        raise InputError("closed forms exist only for 1 hop")

    points = []
    for n_c in grid:
        x = n_c / g.n
        if scope.is_local and n_c == g.n:
            points.append(CurvePoint(1.0, 1.0, 0.0, n_c))
        elif use_exact:
            points.append(CurvePoint(x, _closed_form(g, scope, n_c), 0.0, n_c))
        else:
            est = mc_estimate(g, scope, n_c, trials=trials, seed=mix64(seed, n_c), workers=workers)
            points.append(CurvePoint(x, est.mean, est.stderr, n_c))
    meta = {"n": g.n, "edges": g.num_edges, "trials": None if use_exact else trials, "seed": seed}
    return ObservabilityCurve(points, scope=scope, label=label,
                              method="closed-form" if use_exact else "monte-carlo", meta=meta)


def _trapezoid_weights(x: np.ndarray) -> np.ndarray:
    dx = np.diff(x)
    w = np.zeros_like(x)
    w[:-1] += dx / 2
    w[1:] += dx / 2
    return w


def auoc(curve: ObservabilityCurve) -> float:
    """Trapezoidal area under the curve divided by its x-span.

    On a curve spanning ``[0, 1]`` this is the plain area; partial curves are
    rescaled so they stay comparable. Values are not clamped.
    """
    if len(curve.points) < 2:
        raise InputError("AUOC needs at least 2 curve points")
    x, y = curve.x, curve.values
    span = x[-1] - x[0]
    return float(np.dot(_trapezoid_weights(x), y) / span)


def auoc_stderr(curve: ObservabilityCurve) -> float:
    """Standard error of :func:`auoc`, treating point estimates as independent."""
    if len(curve.points) < 2:
        raise InputError("AUOC needs at least 2 curve points")
    x = curve.x
    w = _trapezoid_weights(x) / (x[-1] - x[0])
    return float(np.sqrt(np.sum((w * curve.stderrs) ** 2)))


def linear_curve(points: int = DEFAULT_GRID_POINTS) -> ObservabilityCurve:
    """The ``value = x`` baseline; its AUOC is exactly 0.5."""
    xs = np.linspace(0.0, 1.0, points)
    return ObservabilityCurve([CurvePoint(float(v), float(v)) for v in xs],
                              label="linear-baseline", method="baseline")


def curve_to_csv(curve: ObservabilityCurve) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "value", "stderr"])
    for p in curve.points:
        w.writerow([f"{p.x:.6g}", f"{p.value:.6g}", f"{p.stderr:.6g}"])
    return buf.getvalue()


def curve_to_dict(curve: ObservabilityCurve) -> dict:
    return {
        "scope": None if curve.scope is None else {
            "target": curve.scope.target, "level": curve.scope.level, "hops": curve.scope.hops},
        "label": curve.label,
        "method": curve.method,
        "auoc": auoc(curve) if len(curve.points) >= 2 else None,
        "auoc_stderr": auoc_stderr(curve) if len(curve.points) >= 2 else None,
        "points": [{"x": p.x, "value": p.value, "stderr": p.stderr, "n_c": p.n_c} for p in curve.points],
    }
