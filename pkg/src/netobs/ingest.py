"""Turn timestamped communication and proximity logs into graphs.

Event CSV rows are ``src,dst,timestamp``; sighting CSV rows are
``a,b,timestamp,cell``. Ids are opaque strings and get dense node ids
through an :class:`IdMap`. Direction and multiplicity are dropped.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .curves import build_curve, curve_grid
from .errors import InputError
from .graph import Graph, from_edge_list
from .montecarlo import McEstimate, Scope, mc_estimate

log = logging.getLogger(__name__)

HOUR = 3600
DAY = 86400


@dataclass(frozen=True)
class EventRecord:
    src: str
    dst: str
    timestamp: float


@dataclass(frozen=True)
class SightingRecord:
    a: str
    b: str
    timestamp: float
    cell: str


@dataclass
class ParseResult:
    records: list
    rejected: int = 0
    diagnostics: list[str] = field(default_factory=list)


class IdMap:
    """Bijection between external ids and dense node ids ``0..len-1``."""

    def __init__(self, ids: Iterable[str] = ()):
        self._to_dense: dict[str, int] = {}
        self._to_ext: list[str] = []
        for i in ids:
            self.add(i)

    def add(self, ext: str) -> int:
        idx = self._to_dense.get(ext)
        if idx is None:
            idx = len(self._to_ext)
            self._to_dense[ext] = idx
            self._to_ext.append(ext)
        return idx

    def dense(self, ext: str) -> int:
        return self._to_dense[ext]

    def external(self, idx: int) -> str:
        return self._to_ext[idx]

    def __contains__(self, ext: str) -> bool:
        return ext in self._to_dense

    def __len__(self) -> int:
        return len(self._to_ext)

    def __iter__(self):
        return iter(self._to_ext)

    @classmethod
    def from_events(cls, records: Iterable[EventRecord]) -> "IdMap":
        m = cls()
        for r in records:
            m.add(r.src)
            m.add(r.dst)
        return m


def _parse_timestamp(text: str) -> float:
    t = float(text)
    if not math.isfinite(t) or t < 0:
        raise ValueError(f"timestamp must be a finite non-negative number, got {text!r}")
    return t


def _rows(lines: Iterable[str]):
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        row = next(csv.reader([line]))
        yield lineno, [c.strip() for c in row]


def parse_events(lines: Iterable[str]) -> ParseResult:
    """Parse ``src,dst,timestamp`` lines; bad rows are counted, not fatal."""
    out = ParseResult([])
    first = True
    for lineno, row in _rows(lines):
        if first and len(row) >= 3 and row[0].lower() == "src":
            first = False
            continue
        first = False
        if len(row) != 3:
            out.rejected += 1
            out.diagnostics.append(f"line {lineno}: expected 3 fields, got {len(row)}")
            continue
        src, dst, ts = row
        if src == dst:
            out.rejected += 1
            out.diagnostics.append(f"line {lineno}: self-contact {src!r} rejected")
            continue
        try:
            t = _parse_timestamp(ts)
        except ValueError:
            out.rejected += 1
            out.diagnostics.append(f"line {lineno}: bad timestamp {ts!r}")
            continue
        out.records.append(EventRecord(src, dst, t))
    return out


def parse_sightings(lines: Iterable[str]) -> ParseResult:
    """Parse ``a,b,timestamp,cell`` lines; bad rows are counted, not fatal."""
    out = ParseResult([])
    first = True
    for lineno, row in _rows(lines):
        if first and len(row) >= 4 and row[0].lower() == "a" and row[3].lower() == "cell":
            first = False
            continue
        first = False
        if len(row) != 4:
            out.rejected += 1
            out.diagnostics.append(f"line {lineno}: expected 4 fields, got {len(row)}")
            continue
        a, b, ts, cell = row
        if a == b:
            out.rejected += 1
            out.diagnostics.append(f"line {lineno}: self-sighting {a!r} rejected")
            continue
        try:
            t = _parse_timestamp(ts)
        except ValueError:
            out.rejected += 1
            out.diagnostics.append(f"line {lineno}: bad timestamp {ts!r}")
            continue
        out.records.append(SightingRecord(a, b, t, cell))
    return out


@dataclass
class EventTable:
    """Columnar view of events over a fixed id universe."""

    idmap: IdMap
    src: np.ndarray
    dst: np.ndarray
    time: np.ndarray

    @classmethod
    def build(cls, records: Sequence[EventRecord], idmap: IdMap | None = None) -> "EventTable":
        idmap = IdMap.from_events(records) if idmap is None else idmap
        src = np.fromiter((idmap.add(r.src) for r in records), dtype=np.int64, count=len(records))
        dst = np.fromiter((idmap.add(r.dst) for r in records), dtype=np.int64, count=len(records))
        time = np.fromiter((r.timestamp for r in records), dtype=np.float64, count=len(records))
        return cls(idmap, src, dst, time)

    @property
    def start(self) -> float:
        return float(self.time.min()) if self.time.size else 0.0

    def window(self, t0: float, duration: float) -> Graph:
        if not duration > 0:
            raise InputError("window duration must be positive")
        sel = (self.time >= t0) & (self.time < t0 + duration)
        pairs = np.column_stack([self.src[sel], self.dst[sel]])
        return from_edge_list(len(self.idmap), pairs)


def window_graph(records: Sequence[EventRecord] | EventTable, t0: float, duration: float,
                 idmap: IdMap | None = None) -> Graph:
    """Graph of all contacts with ``t0 <= timestamp < t0 + duration``.

    The node set is the whole id universe of ``idmap`` (by default every id
    in ``records``), so ``n`` stays fixed across windows.
    """
    table = records if isinstance(records, EventTable) else EventTable.build(records, idmap)
    return table.window(t0, duration)


def colocation_graphs(sightings: Iterable[SightingRecord]) -> dict[tuple[int, str], Graph]:
    """One graph per (epoch hour, cell).

    Nodes of each graph are the devices sighted in that hour and cell,
    numbered in sorted order of their external ids.
    """
    buckets: dict[tuple[int, str], set[tuple[str, str]]] = {}
    for s in sightings:
        key = (int(s.timestamp // HOUR), s.cell)
        pair = (s.a, s.b) if s.a < s.b else (s.b, s.a)
        buckets.setdefault(key, set()).add(pair)
    out = {}
    for key in sorted(buckets):
        pairs = buckets[key]
        devices = sorted({d for p in pairs for d in p})
        index = {d: i for i, d in enumerate(devices)}
        out[key] = from_edge_list(len(devices), [(index[a], index[b]) for a, b in sorted(pairs)])
    return out


@dataclass(frozen=True)
class SweepRow:
    duration: float
    estimate: McEstimate
    auoc: float
    edges: int = 0


def temporal_sweep(records: Sequence[EventRecord] | EventTable, durations: Sequence[float],
                   scope: Scope, x: float, trials: int = 500, seed: int = 0,
                   grid_points: int = 21, curve_trials: int | None = None,
                   workers: int = 1) -> list[SweepRow]:
    """Metric at compromised fraction ``x`` and curve AUOC for nested windows.

    Every window starts at the earliest timestamp. The same seed is reused
    for every window, so each window sees the same compromised sets.
    """
    if list(durations) != sorted(durations):
        raise InputError("window durations must be ascending")
    if not 0.0 <= x <= 1.0:
        raise InputError("compromised fraction must lie in [0, 1]")
    table = records if isinstance(records, EventTable) else EventTable.build(records)
    n = len(table.idmap)
    n_c = min(int(math.floor(x * n + 0.5)), scope.max_compromised(n))
    rows = []
    for d in durations:
        g = table.window(table.start, d)
        est = mc_estimate(g, scope, n_c, trials=trials, seed=seed, workers=workers)
        curve = build_curve(g, scope, curve_grid(g, scope, grid_points), trials=curve_trials or trials,
                            seed=seed, workers=workers)
        log.info("window %gs: %d edges, mean %.4f", d, g.num_edges, est.mean)
        rows.append(SweepRow(float(d), est, curve.auoc(), g.num_edges))
    return rows


def poisson_events(g: Graph, duration: float, rate: float, seed: int = 0,
                   prefix: str = "n") -> list[EventRecord]:
    """Synthetic contact log: each edge of ``g`` fires as a Poisson process.

    ``rate`` is contacts per edge per second. Records come back sorted by
    time, with ids ``f"{prefix}{u}"`` and a random direction per contact.
    """
    if not (duration > 0 and rate > 0):
        raise InputError("duration and rate must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    counts = rng.poisson(rate * duration, size=g.num_edges)
    which = np.repeat(np.arange(g.num_edges), counts)
    times = np.floor(rng.uniform(0.0, duration, size=which.size))
    flip = rng.random(which.size) < 0.5
    order = np.argsort(times, kind="stable")
    e = g.edges
    out = []
    for i in order.tolist():
        a, b = e[which[i]].tolist()
        if flip[i]:
            a, b = b, a
        out.append(EventRecord(f"{prefix}{a}", f"{prefix}{b}", float(times[i])))
    return out


def sweep_to_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["duration_seconds", "metric_mean", "metric_stderr", "auoc"])
    for r in rows:
        w.writerow([f"{r.duration:.6g}", f"{r.estimate.mean:.6g}", f"{r.estimate.stderr:.6g}", f"{r.auoc:.6g}"])
    return buf.getvalue()
