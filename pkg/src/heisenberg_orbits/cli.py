"""Command line entry point.

    heisenberg-orbits run --suite group-axioms --seed 1 --out results/
    heisenberg-orbits traces --point 1,1,0,0 --point 0,0,0,3 --out traces.csv

Exit status of ``run`` is 0 iff every check passes, 1 if any fails and 2
for usage or I/O errors.
"""
from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import __version__
from .harness import (RunConfig, default_trace_points, emit_orbit_traces, load_config_file,
                      run, with_overrides)
from .groups import ModelParams
from .verification import SUITES


def _tolerance(text: str):
    if "=" not in text:
        raise argparse.ArgumentTypeError("expected KEY=VAL")
    k, v = text.split("=", 1)
    return k.strip(), float(v)


def _point(text: str):
    return np.array([float(t) for t in text.split(",")])


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="heisenberg-orbits",
                                 description="Verification suites for the quantum Heisenberg "
                                             "group algebras and their dressing orbits.")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lambda", dest="lam", type=float, help="deformation constant")
    common.add_argument("--n", type=int, help="dimension of the x and y slots")

    r = sub.add_parser("run", parents=[common], help="run verification suites")
    r.add_argument("--config", help="flat key = value file; flags override it")
    r.add_argument("--grid-n", dest="grid_points", type=int, help="grid points per axis")
    r.add_argument("--grid-extent", dest="grid_extent", type=float, help="grid half-width")
    r.add_argument("--suite", dest="suites", action="append", choices=sorted(SUITES),
                   help="suite to run (repeatable; default all)")
    r.add_argument("--no-suites", action="store_true", help="run nothing (empty report)")
    r.add_argument("--seed", type=int)
    r.add_argument("--tolerance", action="append", type=_tolerance, default=[],
                   metavar="KEY=VAL")
    r.add_argument("--out", help="output directory")
    r.add_argument("--parallel", action="store_true", default=None,
                   help="run suites in separate processes")
    r.add_argument("--samples", type=int, help="random triples per group kind")
    r.add_argument("--pairs", type=int, help="random dressing pairs")

    t = sub.add_parser("traces", parents=[common], help="emit orbit point clouds as CSV")
    t.add_argument("--point", action="append", type=_point, default=[],
                   help="base point p,q,r,s (vectors flattened); repeatable")
    t.add_argument("--n-points", type=int, default=65)
    t.add_argument("--span", type=float, default=3.0)
    t.add_argument("--out", default="-", help="CSV path or - for stdout")
    return ap


def _cmd_run(args) -> int:
    kw = load_config_file(args.config) if args.config else {}
    cfg = RunConfig(**kw)
    tols = {**cfg.tolerances, **dict(args.tolerance)}
    suites = () if args.no_suites else (tuple(args.suites) if args.suites else None)
    cfg = with_overrides(cfg, lam=args.lam, n=args.n, grid_points=args.grid_points,
                         grid_extent=args.grid_extent, suites=suites, seed=args.seed,
                         out=args.out, parallel=args.parallel, samples=args.samples,
                         pairs=args.pairs, tolerances=tols)
    report = run(cfg)
    print(report.summary())
    return 0 if report.passed else 1


def _cmd_traces(args) -> int:
    params = ModelParams(args.lam or 0.0, args.n or 1)
    points = args.point or default_trace_points(params.n)
    if args.out == "-":
        rows = emit_orbit_traces(params, points, None, args.n_points, args.span)
        n = params.n
        print(",".join(["orbit", "kind", *[f"p{i + 1}" for i in range(n)],
                        *[f"q{i + 1}" for i in range(n)]]))
        for row in rows:
            print(",".join(str(v) for v in row))
    else:
        emit_orbit_traces(params, points, args.out, args.n_points, args.span)
    return 0


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command is None:
        ap.print_help()
        return 2
    try:
        return _cmd_run(args) if args.command == "run" else _cmd_traces(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
