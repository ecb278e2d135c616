"""Command-line front end: ``swcol <subcommand> ...``."""

from __future__ import annotations

import argparse
import collections
import datetime as _dt
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from ._io import atomic_write_text
from .experiment import WORKERS_ENV, ExperimentConfig, load_config, read_summary_csv, run_sweep, summary_csv
from .graph import DimacsError, GraphError, dumps_dimacs, read_dimacs
from .lattice import Family, LatticeError, LatticeSpec, generate
from .plotting import KINDS, emit_plot
from .rewire import rewire
from .rng import ALGORITHMS, derive_trial_rng, make_rng
from .scaling import CollapseError, CollapseFitter, curves_from_rows
from .solver import SolveBudget, solve

EXIT_OK = 0
EXIT_USAGE = 64
EXIT_DATA = 65


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_graph(path: str):
    with open(path) as fh:
        return read_dimacs(fh)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        atomic_write_text(path, text)


def cmd_lattice(args) -> int:
    spec = LatticeSpec(Family(args.family), args.size)
    g = generate(spec)
    if args.check:
        hist = collections.Counter(g.degrees())
        print(f"N={g.n} M={g.m}")
        print("degree histogram: " + ", ".join(f"{d}:{c}" for d, c in sorted(hist.items())))
    if args.out or not args.check:
        _write(args.out, dumps_dimacs(g, comment=f"lattice {spec}"))
    return EXIT_OK


def cmd_rewire(args) -> int:
    g = _read_graph(args.inp)
    res = rewire(g, args.p, make_rng(args.seed, args.rng))
    comment = f"rewired p={args.p} seed={args.seed} rng={args.rng} moved={res.rewired} skipped={res.skipped}"
    _write(args.out, dumps_dimacs(res.graph, comment=comment))
    print(f"rewired={res.rewired} skipped={res.skipped}", file=sys.stderr)
    return EXIT_OK


def cmd_export(args) -> int:
    spec = LatticeSpec(Family(args.family), args.size)
    g = generate(spec)
    rw = rewire(g, args.p, derive_trial_rng(args.seed, args.trial, args.rng))
    comment = f"lattice {spec} p={args.p} seed={args.seed} trial={args.trial} rng={args.rng}"
    _write(args.out, dumps_dimacs(rw.graph, comment=comment))
    return EXIT_OK


def cmd_solve(args) -> int:
    g = _read_graph(args.inp)
    out = solve(g, args.k, SolveBudget(args.max_nodes), fix_first_colour=not args.no_fix_first)
    print(f"status: {out.status.value}")
    print(f"nodes_visited: {out.nodes_visited}")
    if args.witness and out.witness is not None:
        print("witness: " + " ".join(str(c) for c in out.witness))
    return out.status.exit_code


def _manifest(config: ExperimentConfig, csv_text: str, workers: int | None) -> dict:
    return {
        "tool": "swcol",
        "version": __version__,
        "config": config.to_dict(),
        "master_seed": config.seed,
        "rng": config.rng,
        "workers": workers,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "cells": [{"lattice": str(s), "p": p, "trials": config.trials} for s, p in config.cells()],
        "csv_sha256": hashlib.sha256(csv_text.encode()).hexdigest(),
    }


def cmd_sweep(args) -> int:
    try:
        config = load_config(Path(args.config).read_text())
    except ValueError as exc:
        # a bad lattice inside a config file is bad data, not bad usage
        raise ValueError(f"config {args.config}: {exc}") from None
    if args.raw_dir:
        config.raw_dir = args.raw_dir
    workers = args.workers
    rows = run_sweep(config, workers=workers)
    text = summary_csv(rows)
    atomic_write_text(args.out, text)
    atomic_write_text(f"{args.out}.manifest.json", json.dumps(_manifest(config, text, workers), indent=2) + "\n")
    return EXIT_OK


def cmd_collapse(args) -> int:
    rows = read_summary_csv(Path(args.inp).read_text())
    curves = curves_from_rows(rows, args.family)
    fitter = CollapseFitter(args.a_min, args.a_max, args.step).fit(curves)
    lines = ["a,metric"]
    lines += [f"{a:.6g},{'nan' if m != m else f'{m:.9g}'}" for a, m in zip(fitter.grid_, fitter.metrics_)]
    lines.append(f"# best a={fitter.exponent_:.6g} metric={fitter.metric_:.9g}")
    _write(args.out, "\n".join(lines) + "\n")
    print(f"best a={fitter.exponent_:.6g} metric={fitter.metric_:.9g}", file=sys.stderr)
    if args.emit_rescaled:
        out = ["label,N,p,x,fraction,half_width"]
        for c, rc in zip(curves, fitter.transform(curves)):
            for p, x, y, h in zip(c.x, rc.x, rc.y, rc.h):
                out.append(f"{c.label},{c.N},{p!r},{x!r},{y:.6f},{h:.6f}")
        atomic_write_text(args.emit_rescaled, "\n".join(out) + "\n")
    return EXIT_OK


def cmd_plot(args) -> int:
    rows = read_summary_csv(Path(args.inp).read_text())
    fams = [args.family] if args.family else None
    paths = emit_plot(rows, args.kind, args.out_prefix, csv_name=Path(args.inp).name,
                      families=fams, exponent=args.exponent)
    for p in paths:
        print(p)
    return EXIT_OK


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _prob(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError("must lie in [0, 1]")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="swcol", description="Colouring experiments on rewired lattices.")
    parser.add_argument("--version", action="version", version=f"swcol {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    families = [f.value for f in Family]

    p = sub.add_parser("lattice", help="generate a starting lattice as DIMACS")
    p.add_argument("--family", required=True, choices=families)
    p.add_argument("--size", required=True, type=int)
    p.add_argument("--out")
    p.add_argument("--check", action="store_true", help="print N, M and the degree histogram")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("rewire", help="rewire a DIMACS graph")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--p", required=True, type=_prob)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--out")
    p.add_argument("--rng", default="default", choices=ALGORITHMS)
    p.set_defaults(func=cmd_rewire)

    p = sub.add_parser("solve", help="decide k-colourability of a DIMACS graph")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--k", required=True, type=_positive)
    p.add_argument("--max-nodes", type=_positive, default=None)
    p.add_argument("--witness", action="store_true")
    p.add_argument("--no-fix-first", action="store_true", help="do not pin the first vertex to colour 0")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="run a Monte Carlo sweep from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=_positive, default=None, help=f"overrides config and ${WORKERS_ENV}")
    p.add_argument("--raw-dir")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("collapse", help="scan the finite-size-scaling exponent")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--a-min", type=float, default=-3.0)
    p.add_argument("--a-max", type=float, default=3.0)
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--out")
    p.add_argument("--emit-rescaled")
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("plot", help="write SVG figures from a sweep CSV")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--family")
    p.add_argument("--exponent", type=float)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("export", help="write the exact graph used by one sweep trial")
    p.add_argument("--family", required=True, choices=families)
    p.add_argument("--size", required=True, type=int)
    p.add_argument("--p", type=_prob, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trial", type=int, default=0, help="global trial index within the sweep")
    p.add_argument("--rng", default="default", choices=ALGORITHMS)
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (LatticeError, GraphError) as exc:
        print(f"swcol {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DimacsError, CollapseError, OSError, ValueError) as exc:
        print(f"swcol {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
