"""Command-line front end.

Exit codes: 0 success, 2 validation error, 3 I/O error, 4 internal error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import batch as batch_mod
from .faultsim import EXACT, SAMPLED, ZERO, SimConfig, build_fault_profile, format_profile, read_profile
from .graph import GraphError, edge_connectivity, format_graph, independence_number, read_graph
from .plot import render_svg
from .tolerance import BoundParams, build_curve, corollary_limit, format_curve, p_grid, parse_curve, upper_bound
from .topologies import materialize, parse_spec

log = logging.getLogger("eftol")

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_INTERNAL = 0, 2, 3, 4


def _emit(text: str, out: str | None) -> None:
    if out:
        batch_mod._atomic_write(Path(out), text)
    else:
        sys.stdout.write(text)


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"{text} is not an unsigned 64-bit integer")
    return value


def cmd_gen(args) -> int:
    spec = parse_spec(args.spec)
    g = materialize(spec, strict=not args.relaxed)
    degrees = sorted(set(g.degrees))
    degree = str(degrees[0]) if len(degrees) == 1 else "-".join(map(str, degrees))
    meta = f"spec={spec.canonical_name} n={g.n} m={g.m} degree={degree}\n"
    _emit(format_graph(g), args.out)
    if args.out:
        batch_mod._atomic_write(Path(args.out + ".meta"), meta)
    else:
        sys.stderr.write(meta)
    return EXIT_OK


def cmd_profile(args) -> int:
    g = read_graph(args.graph)
    name = args.name or Path(args.graph).stem
    cfg = SimConfig(trials=args.trials, master_seed=args.seed, exact_threshold=args.exact_threshold)
    profile = build_fault_profile(g, cfg, name)
    _emit(format_profile(profile), args.out)
    modes = {mode: [lv.f for lv in profile.levels if lv.mode == mode] for mode in (EXACT, SAMPLED, ZERO)}
    lam = edge_connectivity(g) if g.n >= 2 else 0
    parts = [f"{name}: n={g.n} m={g.m} lambda={lam}"]
    for mode, fs in modes.items():
        if fs:
            parts.append(f"{mode} f={fs[0]}..{fs[-1]}")
    sys.stderr.write("; ".join(parts) + "\n")
    return EXIT_OK


def _pair(text: str) -> tuple[int, int]:
    try:
        d, i = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'd,i', got {text!r}") from None
    return d, i


def cmd_tolerance(args) -> int:
    profile = read_profile(args.profile)
    curve = build_curve(profile, p_grid(args.p_grid), args.bound)
    _emit(format_curve(curve), args.out)
    return EXIT_OK


def cmd_bound(args) -> int:
    if args.graph:
        g = read_graph(args.graph)
        if not g.is_regular() or g.min_degree < 1:
            raise GraphError("the bound applies to regular graphs of degree >= 1")
        d, i = g.min_degree, independence_number(g)
    elif args.d is not None and args.i is not None:
        d, i = args.d, args.i
    else:
        raise GraphError("bound needs --d and --i, or --graph")
    limit = BoundParams(d, i, args.alpha, args.c) if args.alpha is not None else None
    lines = [f"# d={d} i={i}", "p,upper_bound" + (",limit" if limit else "")]
    for p in p_grid(args.p_grid):
        row = f"{p:.6f},{upper_bound(d, i, p):.6f}"
        if limit:
            row += f",{corollary_limit(limit, p):.6f}" if 0 < p < 1 else ","
        lines.append(row)
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_batch(args) -> int:
    text = Path(args.config).read_text(encoding="utf-8")
    config = batch_mod.parse_batch(text, args.config)
    overrides = {}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.exact_threshold is not None:
        overrides["exact_threshold"] = args.exact_threshold
    if overrides:
        config = batch_mod.with_overrides(config, **overrides)
    out = args.out or "batch-out"
    total = len(config.graphs)
    done = []

    def progress(name: str) -> None:
        done.append(name)
        log.info("[%d/%d] %s", len(done), total, name)

    batch_mod.run_batch(config, out, workers=args.workers, progress=progress)
    sys.stderr.write(f"wrote {total} graphs and {len(config.averages)} averages to {out}\n")
    return EXIT_OK


def cmd_plot(args) -> int:
    if not args.curves:
        raise GraphError("plot needs at least one tolerance CSV")
    curves = []
    for path in args.curves:
        curves.append((Path(path).stem, parse_curve(Path(path).read_text(encoding="utf-8"), path)))
    _emit(render_svg(curves, show_bound=args.show_bound), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (stdout when omitted)")
    sim = argparse.ArgumentParser(add_help=False)
    sim.add_argument("--seed", type=_u64, default=0, help="master seed (u64)")
    sim.add_argument("--trials", type=int, default=2000, help="sampled fault sets per level")
    sim.add_argument("--exact-threshold", type=int, default=None, help="enumerate level f when C(m,f) <= this")
    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--p-grid", default="0.1:0.9:0.1", help="start:stop:step, stop inclusive")

    parser = argparse.ArgumentParser(prog="eftol", description="Edge-fault tolerance of regular graphs.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate a graph file from a spec string")
    p.add_argument("spec")
    p.add_argument("--relaxed", action="store_true", help="skip strict circulant validation")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("profile", parents=[common, sim], help="fault profile of a graph file")
    p.add_argument("graph")
    p.add_argument("--name", help="graph name used in the file and for seeding")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("tolerance", parents=[common, grid], help="tolerance curve from a profile CSV")
    p.add_argument("profile")
    p.add_argument("--bound", type=_pair, help="d,i for the upper-bound column")
    p.set_defaults(func=cmd_tolerance)

    p = sub.add_parser("bound", parents=[common, grid], help="evaluate (1 - p^d)^i")
    p.add_argument("--d", type=int)
    p.add_argument("--i", type=int)
    p.add_argument("--graph", help="regular graph file; d and i are computed exactly")
    p.add_argument("--alpha", type=float, help="also print the large-degree limit for this alpha")
    p.add_argument("--c", type=float, default=1.0)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("batch", parents=[common], help="run a batch config")
    p.add_argument("config")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--seed", type=_u64, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--exact-threshold", type=int, default=None)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("plot", parents=[common], help="SVG chart of tolerance CSVs")
    p.add_argument("curves", nargs="*")
    p.add_argument("--show-bound", action="store_true")
    p.set_defaults(func=cmd_plot)
    return parser


def _configure_logging(verbose: bool) -> None:
    # own handler on the package logger, bound to the current stderr
    for h in list(log.handlers):
        log.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO if verbose else logging.WARNING)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    if args.command == "plot" and not args.curves:
        parser.error("plot needs at least one tolerance CSV")
    try:
        return args.func(args)
    except OSError as exc:
        print(f"eftol: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except batch_mod.BatchError as exc:
        print(f"eftol: {exc}", file=sys.stderr)
        cause = exc.__cause__
        if isinstance(cause, OSError):
            return EXIT_IO
        return EXIT_VALIDATION if isinstance(cause, ValueError) else EXIT_INTERNAL
    except ValueError as exc:
        print(f"eftol: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:
        print(f"eftol: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
