"""City-scale local node-observability from per-km² population blocks.

A fitted curve maps compromised devices per km² to the chance that a device
in that square kilometre is sensed by a compromised one. Population-weighting
it over blocks gives the city-wide figure; when only population and area are
known, block populations are drawn from an exponential with the city's mean
density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate

from .curves import CurvePoint, ObservabilityCurve
from .errors import InputError, MetricDomainError
from .montecarlo import mix64

LNO_SLOPE = 0.13
LNO_INTERCEPT = -0.05
# samples per independently seeded chunk; fixed so results ignore worker count
_CHUNK = 1 << 16


@dataclass(frozen=True)
class CityProfile:
    population: float
    area: float

    def __post_init__(self):
        if not (self.population > 0 and self.area > 0):
            raise InputError("population and area must both be positive")

    @property
    def density(self) -> float:
        return self.population / self.area


def lno_approx(m, slope: float = LNO_SLOPE, intercept: float = LNO_INTERCEPT):
    """``clamp(slope * ln(m) + intercept, 0, 1)``, with 0 at ``m = 0``.

    Accepts a scalar or an array of compromised-device densities.
    """
    arr = np.asarray(m, dtype=np.float64)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise InputError("compromised density must be non-negative")
    safe = np.where(arr > 0, arr, 1.0)
    out = np.where(arr > 0, np.clip(slope * np.log(safe) + intercept, 0.0, 1.0), 0.0)
    return float(out) if out.ndim == 0 else out


def _blocks(blocks) -> np.ndarray:
    b = np.asarray(blocks, dtype=np.float64).ravel()
    if b.size == 0:
        raise InputError("need at least one block")
    if np.any(b < 0) or not np.all(np.isfinite(b)):
        raise InputError("block populations must be finite and non-negative")
    return b


def local_node_obs_city(blocks: Sequence[float] | np.ndarray, x: float,
                        slope: float = LNO_SLOPE, intercept: float = LNO_INTERCEPT) -> float:
    """Population-weighted mean of the fitted curve at ``x * B_i`` per block."""
    if not 0.0 <= x <= 1.0:
        raise InputError(f"compromised fraction must lie in [0, 1], got {x}")
    b = _blocks(blocks)
    pop = math.fsum(b)
    if pop <= 0:
        raise MetricDomainError("total population is zero")
    obs = math.fsum(lno_approx(x * b, slope, intercept) * b)
    return obs / pop


def sample_blocks(profile: CityProfile, samples: int, seed: int = 0) -> np.ndarray:
    """Exponential block populations with mean ``profile.density``."""
    if samples < 1:
        raise InputError("samples must be >= 1")
    parts = []
    for c, start in enumerate(range(0, samples, _CHUNK)):
        size = min(_CHUNK, samples - start)
        rng = np.random.Generator(np.random.PCG64(mix64(seed, c)))
        parts.append(rng.exponential(profile.density, size=size))
    return np.concatenate(parts)


def estimate_city_exponential(profile: CityProfile, x: float, samples: int = 100_000,
                              seed: int = 0, slope: float = LNO_SLOPE,
                              intercept: float = LNO_INTERCEPT) -> float:
    """Local node-observability of a city known only by population and area."""
    return local_node_obs_city(sample_blocks(profile, samples, seed), x, slope, intercept)


def exponential_integral(profile: CityProfile, x: float, slope: float = LNO_SLOPE,
                         intercept: float = LNO_INTERCEPT) -> float:
    """``E[LNO(x B) B] / E[B]`` for exponential ``B`` by numerical quadrature.

    The large-sample limit of :func:`estimate_city_exponential`.
    """
    lam = profile.density

    def f(b):
        return lno_approx(x * b, slope, intercept) * b * math.exp(-b / lam) / lam

    # the integrand has kinks where the clamp engages; give them to quad
    pts = [p / x for p in (math.exp((0 - intercept) / slope), math.exp((1 - intercept) / slope))] if x > 0 else []
    upper = 60 * lam
    pts = sorted(p for p in pts if 0 < p < upper)
    val, _ = integrate.quad(f, 0, upper, points=pts or None, limit=400)
    return val / lam


def city_sweep(xs: Sequence[float], blocks=None, profile: CityProfile | None = None,
               samples: int = 100_000, seed: int = 0, label: str = "") -> ObservabilityCurve:
    """City curve over compromised fractions ``xs``.

    Pass ``blocks`` for census-style input or ``profile`` for the exponential
    estimate. Sampled blocks are drawn once and reused for every ``x``.
    """
    if (blocks is None) == (profile is None):
        raise InputError("pass exactly one of blocks or profile")
    xs = [float(v) for v in xs]
    if any(not 0.0 <= v <= 1.0 for v in xs):
        raise InputError("fractions must lie in [0, 1]")
    b = _blocks(blocks) if blocks is not None else sample_blocks(profile, samples, seed)
    if math.fsum(b) <= 0:
        raise MetricDomainError("total population is zero")
    points = [CurvePoint(v, local_node_obs_city(b, v)) for v in xs]
    method = "census" if blocks is not None else "exponential"
    return ObservabilityCurve(points, label=label, method=method,
                              meta={"blocks": int(b.size), "seed": None if blocks is not None else seed})


def read_blocks(lines) -> np.ndarray:
    """One non-negative population per line; blank and ``#`` lines skipped."""
    vals = []
    for lineno, line in enumerate(lines, start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            vals.append(float(s))
        except ValueError:
            raise InputError(f"line {lineno}: not a number: {s!r}") from None
    return _blocks(vals)
