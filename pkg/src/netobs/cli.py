"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 bad input data, 4 resource budget
exceeded. ``OBS_SEED`` supplies the default seed. Output goes to ``--out``
(stdout when omitted); logs go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from typing import Sequence

from . import __version__
from .city import CityProfile, city_sweep, estimate_city_exponential, local_node_obs_city, read_blocks
from .curves import (DEFAULT_GRID_POINTS, build_curve, curve_grid, curve_to_csv, curve_to_dict,
                     linear_curve)
from .errors import BudgetError, InputError, MetricDomainError
from .generators import FAMILIES, GeneratorSpec, params_for_density
from .graph import density, read_edge_list, write_edge_list
from .ingest import DAY, HOUR, colocation_graphs, parse_events, parse_sightings, sweep_to_csv, temporal_sweep
from .montecarlo import Scope, brute_force_metric

log = logging.getLogger("netobs")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_BUDGET = 0, 2, 3, 4
DEFAULT_TRIALS = 500


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get("OBS_SEED")
    if raw is None:
        return 0
    try:
        return int(raw, 0)
    except ValueError:
        raise UsageError(f"OBS_SEED must be an integer, got {raw!r}") from None


def _fraction(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"fraction must lie in [0, 1], got {text}")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text}")
    return v


def _duration(text: str) -> float:
    """``90``, ``36h`` or ``7d``; plain numbers are seconds."""
    text = text.strip().lower()
    scale = {"s": 1, "h": HOUR, "d": DAY}.get(text[-1:], None)
    num = text[:-1] if scale else text
    v = float(num) * (scale or 1)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"window must be positive, got {text}")
    return v


def _csv_list(conv):
    def parse(text: str):
        try:
            return [conv(t) for t in text.split(",") if t.strip()]
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return parse


def _add_common(p: argparse.ArgumentParser, stochastic: bool = True, fmt: Sequence[str] | None = None):
    p.add_argument("--out", "-o", default="-", help="output path; '-' writes to stdout (default)")
    if fmt:
        p.add_argument("--format", choices=fmt, default=fmt[0], help=f"output format (default {fmt[0]})")
    if stochastic:
        p.add_argument("--seed", type=lambda s: int(s, 0), default=None,
                       help="64-bit random seed (default: $OBS_SEED, else 0)")
        p.add_argument("--workers", type=_positive_int, default=1,
                       help="maximum parallel workers; never changes the output (default 1)")


def _add_scope(p: argparse.ArgumentParser, target="edge", level="global"):
    p.add_argument("--target", choices=("edge", "node"), default=target, help=f"observed element (default {target})")
    p.add_argument("--level", choices=("global", "local"), default=level, help=f"global or local metric (default {level})")
    p.add_argument("--hops", type=int, default=1, help="attacker reach in hops, >= 1 (default 1)")


def _add_trials(p: argparse.ArgumentParser):
    p.add_argument("--trials", type=_positive_int, default=DEFAULT_TRIALS,
                   help=f"Monte-Carlo trials per estimate (default {DEFAULT_TRIALS})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netobs", description="Node- and edge-observability toolkit.")
    parser.add_argument("--version", action="version", version=f"netobs {__version__}")
    parser.add_argument("--log-level", default="WARNING", help="stderr log level (default WARNING)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a synthetic graph as an edge list")
    p.add_argument("--family", choices=FAMILIES, required=True, help="graph family")
    p.add_argument("--n", type=_positive_int, required=True, help="number of nodes")
    p.add_argument("--density", type=float, help="target density; picks p, m or k automatically")
    p.add_argument("--p", type=float, help="ER edge probability or WS rewiring probability")
    p.add_argument("--m", type=int, help="BA attachment count")
    p.add_argument("--k", type=int, help="WS ring neighbour count (odd values round down)")
    p.add_argument("--rewire", type=float, default=0.2, help="WS rewiring probability with --density (default 0.2)")
    _add_common(p)

    p = sub.add_parser("observe", help="estimate one metric at one compromised count")
    p.add_argument("graph", help="edge-list file")
    _add_scope(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--nc", type=int, help="number of compromised nodes")
    group.add_argument("--fraction", type=_fraction, help="fraction of nodes compromised")
    p.add_argument("--method", choices=("auto", "exact", "mc", "brute"), default="auto",
                   help="auto: closed form for 1-hop edges, sampling otherwise; "
                        "brute: enumerate every compromised set (default auto)")
    p.add_argument("--budget", type=_positive_int, default=1_000_000,
                   help="most compromised sets --method brute may enumerate (default 1000000)")
    _add_trials(p)
    _add_common(p)

    p = sub.add_parser("curve", help="observability curve and its AUOC")
    p.add_argument("graph", nargs="?", help="edge-list file (not needed with --selftest-linear)")
    _add_scope(p)
    p.add_argument("--grid-points", type=_positive_int, default=DEFAULT_GRID_POINTS,
                   help=f"evenly spaced compromised fractions (default {DEFAULT_GRID_POINTS})")
    p.add_argument("--method", choices=("auto", "exact", "mc"), default="auto",
                   help="auto: closed form for 1-hop edges, sampling otherwise (default auto)")
    p.add_argument("--selftest-linear", action="store_true", help="emit the value = x baseline curve instead")
    _add_trials(p)
    _add_common(p, fmt=("json", "csv"))

    p = sub.add_parser("sweep", help="metric and AUOC over growing observation windows")
    p.add_argument("events", help="event CSV: src,dst,timestamp")
    p.add_argument("--windows", type=_csv_list(_duration), required=True,
                   help="comma-separated ascending durations, e.g. 1d,7d,28d (suffix s, h or d)")
    _add_scope(p, level="global")
    p.add_argument("--fraction", type=_fraction, default=0.01, help="fraction of nodes compromised (default 0.01)")
    p.add_argument("--grid-points", type=_positive_int, default=DEFAULT_GRID_POINTS,
                   help=f"curve points for the AUOC column (default {DEFAULT_GRID_POINTS})")
    p.add_argument("--curve-trials", type=_positive_int, default=None,
                   help="trials per curve point (default: same as --trials)")
    _add_trials(p)
    _add_common(p)

    p = sub.add_parser("colocate", help="hourly per-cell co-location graphs and their observability")
    p.add_argument("sightings", help="sighting CSV: a,b,timestamp,cell")
    _add_scope(p, target="node", level="local")
    p.add_argument("--fraction", type=_fraction, default=0.01, help="fraction of devices compromised (default 0.01)")
    _add_trials(p)
    _add_common(p)

    p = sub.add_parser("city", help="city-scale local node-observability")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--blocks", help="file with one population per 1 km2 block per line")
    src.add_argument("--population", type=float, help="city population (use with --area)")
    p.add_argument("--area", type=float, help="city area in km2 (use with --population)")
    xs = p.add_mutually_exclusive_group(required=True)
    xs.add_argument("--fraction", type=_fraction, help="fraction of devices compromised")
    xs.add_argument("--grid", type=_csv_list(_fraction), help="comma-separated fractions for a curve")
    p.add_argument("--samples", type=_positive_int, default=100_000,
                   help="exponential block samples with --population (default 100000)")
    _add_common(p, fmt=("json", "csv"))
    return parser


def _write(out: str, text: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _config(args: argparse.Namespace) -> dict:
    # workers and logging never affect results, so they stay out of the output
    skip = {"workers", "log_level", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _meta(args) -> dict:
    return {"version": __version__, "config": _config(args)}


def _csv_meta(args) -> str:
    return f"# netobs {__version__}\n# config: {json.dumps(_config(args), sort_keys=True)}\n"


def _scope(args) -> Scope:
    if args.hops < 1:
        raise UsageError(f"--hops must be >= 1, got {args.hops}")
    return Scope(target=args.target, level=args.level, hops=args.hops)


def _round_count(x: float, n: int) -> int:
    return int(math.floor(x * n + 0.5))


def cmd_generate(args) -> int:
    if args.density is not None:
        if any(v is not None for v in (args.p, args.m, args.k)):
            raise UsageError("--density cannot be combined with --p/--m/--k")
        spec = params_for_density(args.family, args.n, args.density, seed=args.seed, rewire_p=args.rewire)
    else:
        spec = GeneratorSpec(args.family, args.n, p=args.p, m=args.m, k=args.k, seed=args.seed)
    g = spec.build()
    if args.out == "-":
        write_edge_list(g, sys.stdout)
    else:
        write_edge_list(g, args.out)
        sidecar = {
            **_meta(args),
            "params": spec.params(),
            "nodes": g.n,
            "edges": g.num_edges,
            "density": density(g) if g.n >= 2 else None,
            "expected_density": spec.expected_density(),
        }
        _write(args.out + ".json", _json(sidecar))
    log.info("generated %s graph: n=%d edges=%d", spec.family, g.n, g.num_edges)
    return EXIT_OK


def cmd_observe(args) -> int:
    scope = _scope(args)
    g = read_edge_list(args.graph)
    n_c = args.nc if args.nc is not None else _round_count(args.fraction, g.n)
    if scope.is_local and n_c == g.n:
        raise MetricDomainError(f"{scope.name} is undefined when every node is compromised")
    if args.method == "brute":
        value, stderr, method = brute_force_metric(g, scope, n_c, budget=args.budget), 0.0, "brute-force"
    else:
        curve = build_curve(g, scope, [n_c], trials=args.trials, seed=args.seed, method=args.method,
                            workers=args.workers)
        value, stderr, method = curve.points[0].value, curve.points[0].stderr, curve.method
    doc = {
        **_meta(args),
        "scope": {"target": scope.target, "level": scope.level, "hops": scope.hops},
        "n": g.n, "edges": g.num_edges, "n_c": n_c,
        "value": value, "mean": value, "stderr": stderr,
        "trials": args.trials if method == "monte-carlo" else None,
        "method": method,
    }
    _write(args.out, _json(doc))
    return EXIT_OK


def cmd_curve(args) -> int:
    if args.selftest_linear:
        curve = linear_curve(args.grid_points)
    else:
        if args.graph is None:
            raise UsageError("a graph file is required unless --selftest-linear is given")
        scope = _scope(args)
        g = read_edge_list(args.graph)
        grid = curve_grid(g, scope, args.grid_points)
        curve = build_curve(g, scope, grid, trials=args.trials, seed=args.seed, method=args.method,
                            label=os.path.basename(args.graph), workers=args.workers)
    if args.format == "json":
        _write(args.out, _json({**_meta(args), **curve_to_dict(curve)}))
    else:
        head = _csv_meta(args) + f"# auoc: {curve.auoc():.6g}\n"
        _write(args.out, head + curve_to_csv(curve))
    return EXIT_OK


def cmd_sweep(args) -> int:
    scope = _scope(args)
    with open(args.events, encoding="utf-8") as fh:
        parsed = parse_events(fh)
    for d in parsed.diagnostics:
        log.warning("%s: %s", args.events, d)
    if not parsed.records:
        raise InputError(f"{args.events}: no valid events")
    rows = temporal_sweep(parsed.records, args.windows, scope, args.fraction, trials=args.trials,
                          seed=args.seed, grid_points=args.grid_points, curve_trials=args.curve_trials,
                          workers=args.workers)
    _write(args.out, _csv_meta(args) + sweep_to_csv(rows))
    return EXIT_OK


def cmd_colocate(args) -> int:
    scope = _scope(args)
    with open(args.sightings, encoding="utf-8") as fh:
        parsed = parse_sightings(fh)
    for d in parsed.diagnostics:
        log.warning("%s: %s", args.sightings, d)
    lines = ["hour,cell,nodes,edges,n_c,mean,stderr,method"]
    for (hour, cell), g in colocation_graphs(parsed.records).items():
        n_c = min(_round_count(args.fraction, g.n), scope.max_compromised(g.n))
        try:
            curve = build_curve(g, scope, [n_c], trials=args.trials, seed=args.seed, workers=args.workers,
                                method="exact" if scope.hops == 1 else "auto")
        except MetricDomainError as exc:
            log.info("hour %d cell %s skipped: %s", hour, cell, exc)
            lines.append(f"{hour},{cell},{g.n},{g.num_edges},{n_c},,,undefined")
            continue
        pt = curve.points[0]
        lines.append(f"{hour},{cell},{g.n},{g.num_edges},{n_c},{pt.value:.6g},{pt.stderr:.6g},{curve.method}")
    _write(args.out, _csv_meta(args) + "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_city(args) -> int:
    if args.blocks is not None:
        if args.area is not None:
            raise UsageError("--area only applies with --population")
        with open(args.blocks, encoding="utf-8") as fh:
            blocks, profile = read_blocks(fh), None
        method = "census"
    else:
        if args.area is None:
            raise UsageError("--population needs --area")
        blocks, profile = None, CityProfile(args.population, args.area)
        method = "exponential"

    if args.fraction is not None:
        if blocks is not None:
            est = local_node_obs_city(blocks, args.fraction)
        else:
            est = estimate_city_exponential(profile, args.fraction, args.samples, args.seed)
        if args.format == "json":
            _write(args.out, _json({**_meta(args), "x": args.fraction, "estimate": est, "method": method}))
        else:
            _write(args.out, _csv_meta(args) + f"x,estimate\n{args.fraction:.6g},{est:.6g}\n")
        return EXIT_OK

    curve = city_sweep(sorted(set(args.grid)), blocks=blocks, profile=profile, samples=args.samples,
                       seed=args.seed)
    if args.format == "json":
        doc = {**_meta(args), **curve_to_dict(curve), "method": method}
        if len(curve.points) < 2:
            doc["auoc"] = None
        _write(args.out, _json(doc))
    else:
        head = _csv_meta(args)
        if len(curve.points) >= 2:
            head += f"# auoc: {curve.auoc():.6g}\n"
        _write(args.out, head + curve_to_csv(curve))
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "observe": cmd_observe,
    "curve": cmd_curve,
    "sweep": cmd_sweep,
    "colocate": cmd_colocate,
    "city": cmd_city,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                        format="level=%(levelname)s logger=%(name)s msg=%(message)s")
    try:
        if getattr(args, "seed", "absent") is None:
            args.seed = _default_seed()
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"netobs {args.command}: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetError as exc:
        print(f"netobs {args.command}: resource budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, MetricDomainError, OSError, ValueError) as exc:
        print(f"netobs {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
