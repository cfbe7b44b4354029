"""Command-line entry point.

Subcommands: ingest, distances, socioplex, barcodes, obstructions, calibrate.
Exit status is 0 on success, 1 on data/validation errors and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

from . import __version__
from .agents import load_agents, save_agents, validate
from .calibration import CalibrationConfig, collaboration_labels, fit_weights, load_label_pairs, score_weights
from .complex import build_filtration, build_socioplex, diameter, simplices_json, socioplex_dot
from .errors import AgentIOError, InvalidWeights, SocioplexError
from .metric import DistanceMatrix, Weights, distance_matrix, verify_metric
from .obstructions import find_obstructions, obstructions_json, obstructions_table
from .persistence import barcodes, representative_cycle
from .render import render_barcode_svg

log = logging.getLogger("socioplex")


class UsageError(Exception):
    pass


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if math.isnan(value) or value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text!r}")
    return value


def _nonneg_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text!r}")
    return value


def _write(text: str, path) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise AgentIOError(f"cannot write {path}: {exc.strerror or exc}") from exc
    log.info("wrote %s", path)


# ------------------------------------------------------------------ inputs


def _add_agent_input(p, required=True):
    p.add_argument("--agents", required=required, metavar="FILE", help="agent file (csv or json)")
    p.add_argument("--agents-format", choices=("csv", "json"), default=None,
                   help="agent file format (default: from the file suffix)")


def _add_weight_options(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--weights", metavar="K1,..,K5", help="distance weights summing to 1 (default 0.2 each)")
    g.add_argument("--fit-grid", type=float, metavar="STEP",
                   help="calibrate weights on a simplex grid with this step instead of passing them")
    p.add_argument("--labels", metavar="FILE", help="labelled pairs for --fit-grid (one 'idA,idB' per line)")


def _add_matrix_input(p):
    src = p.add_argument_group("input (one of)")
    src.add_argument("--dist", metavar="FILE", help="distance matrix JSON {ids, entries}")
    _add_agent_input(src, required=False)
    _add_weight_options(p)


def _resolve_weights(args, agents) -> Weights:
    if getattr(args, "fit_grid", None) is not None:
        labels = load_label_pairs(args.labels) if args.labels else None
        source = "held_out_pairs" if labels is not None else "d4_labels"
        try:
            cfg = CalibrationConfig(grid_step=args.fit_grid, label_source=source)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        w = fit_weights(agents, cfg, labels=labels)
        log.info("calibrated weights %s", w)
        return w
    if args.weights:
        try:
            return Weights.parse(args.weights)
        except InvalidWeights as exc:
            raise UsageError(str(exc)) from None
    return Weights.uniform()


def _load_matrix(args) -> DistanceMatrix:
    if bool(args.dist) == bool(args.agents):
        raise UsageError("give exactly one of --dist or --agents")
    if args.dist:
        if args.weights or args.fit_grid is not None:
            raise UsageError("--weights/--fit-grid only apply to --agents input")
        return DistanceMatrix.load(args.dist)
    agents = load_agents(args.agents, args.agents_format)
    return distance_matrix(agents, _resolve_weights(args, agents))


def _threshold(args, m: DistanceMatrix) -> float:
    t = args.threshold
    if args.relative:
        if not 0 <= t <= 1:
            raise UsageError("a relative threshold must lie in [0, 1]")
        diam = diameter(m)
        value = t * diam
        log.info("relative threshold %s x diameter %s = %s", t, diam, value)
        return value
    return t


# ------------------------------------------------------------------ commands


def cmd_ingest(args) -> int:
    agents = load_agents(args.agents, args.agents_format)
    report = validate(agents)
    if args.out:
        save_agents(agents, args.out, args.out_format)
        log.info("wrote %d agents to %s", len(agents), args.out)
    if report.ok:
        sys.stdout.write(f"{len(agents)} agents, no problems\n")
        return 0
    sys.stdout.write(report.format() + "\n")
    sys.stdout.write(f"{len(agents)} agents, {len(report)} problems\n")
    return 1


def cmd_distances(args) -> int:
    agents = load_agents(args.agents, args.agents_format)
    w = _resolve_weights(args, agents)
    m = distance_matrix(agents, w)
    report = verify_metric(m)
    if not report.ok:  # pragma: no cover - guaranteed by construction
        log.error("distance matrix is not a metric: %s", report.summary())
        return 1
    _write(m.to_json(), args.out)
    return 0


def cmd_socioplex(args) -> int:
    m = _load_matrix(args)
    M = _threshold(args, m)
    k = build_socioplex(m, M, args.max_dim, cap=args.cap)
    if args.dot:
        _write(socioplex_dot(m, M, m.ids), args.dot)
    if args.simplices:
        _write(simplices_json(k), args.simplices)
    if args.dot != "-" and args.simplices != "-":
        lines = [f"threshold {_g(M)}"]
        lines += [f"dim {d}: {k.count(d)} simplices" for d in range(args.max_dim + 1)]
        sys.stdout.write("\n".join(lines) + "\n")
    return 0


def _g(x: float) -> str:
    return format(x, ".12g")


def cmd_barcodes(args) -> int:
    m = _load_matrix(args)
    f = build_filtration(m, args.max_dim, args.max_scale, cap=args.cap)
    want_reps = args.representatives
    d = barcodes(f, keep_zero_length=args.keep_zero_length, representatives=want_reps)
    if args.format == "text":
        text = d.to_text()
    elif args.format == "json":
        reps = None
        if want_reps:
            reps = {}
            for iv in d.intervals:
                if iv.dim >= 1:
                    chain = representative_cycle(f, iv, d.reduction)
                    reps[iv] = [[m.ids[v] for v in s.vertices] for s in chain]
        text = d.to_json(reps)
    else:
        scale = args.max_scale if math.isfinite(args.max_scale) else None
        text = render_barcode_svg(d, max_scale=scale, allow_empty=True)
    _write(text, args.out)
    return 0


def cmd_obstructions(args) -> int:
    m = _load_matrix(args)
    M = _threshold(args, m)
    dims = (1, 2) if args.voids else (1,)
    if args.voids and args.max_dim < 3:
        raise UsageError("--voids needs --max-dim 3 or more")
    f = build_filtration(m, args.max_dim, args.max_scale, cap=args.cap)
    d = barcodes(f, representatives=True)
    reports = find_obstructions(f, d, M, args.min_persistence, m=m, ids=m.ids, dims=dims)
    text = obstructions_json(reports) if args.format == "json" else obstructions_table(reports)
    _write(text, args.out)
    return 0


def cmd_calibrate(args) -> int:
    agents = load_agents(args.agents, args.agents_format)
    labels = load_label_pairs(args.labels) if args.labels else None
    source = "held_out_pairs" if labels is not None else "d4_labels"
    try:
        cfg = CalibrationConfig(grid_step=args.grid, label_source=source)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    w = fit_weights(agents, cfg, labels=labels)
    if labels is None:
        labels = collaboration_labels(agents)
    auc = score_weights(agents, w, labels)
    n_pairs = len({tuple(sorted(p)) for p in labels})
    _write(f"weights {w}\nauc {auc:.6f}\nlabels {source} ({n_pairs} pairs)\n", args.out)
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="socioplex",
        description="Research distances, socioplexes and persistent barcodes for collaboration data.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    common.add_argument("--seed", type=int, default=None,
                        help="reserved; accepted and ignored (nothing is randomized)")
    common.add_argument("--cap", type=int, default=None,
                        help="simplex cap (default: $SOCIOPLEX_SIMPLEX_CAP or 5000000)")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("ingest", parents=[common], help="load and validate an agent file")
    _add_agent_input(p)
    p.add_argument("--out", metavar="FILE", help="re-save the agents (format from suffix or --out-format)")
    p.add_argument("--out-format", choices=("csv", "json"))
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("distances", parents=[common], help="compute the research distance matrix")
    _add_agent_input(p)
    _add_weight_options(p)
    p.add_argument("--out", metavar="FILE", help="output JSON (default stdout)")
    p.set_defaults(func=cmd_distances)

    def scale_options(p, threshold):
        if threshold:
            p.add_argument("--threshold", type=_positive_float, required=True, metavar="M")
            p.add_argument("--relative", action="store_true",
                           help="read the threshold as a fraction of the diameter")
        p.add_argument("--max-dim", type=_nonneg_int, default=2, help="largest simplex dimension (default 2)")

    p = sub.add_parser("socioplex", parents=[common], help="flag complex at one threshold")
    _add_matrix_input(p)
    scale_options(p, threshold=True)
    p.add_argument("--dot", metavar="FILE", help="write the 1-skeleton as Graphviz DOT")
    p.add_argument("--simplices", metavar="FILE", help="write the simplex list as JSON")
    p.set_defaults(func=cmd_socioplex)

    p = sub.add_parser("barcodes", parents=[common], help="persistent homology barcodes")
    _add_matrix_input(p)
    scale_options(p, threshold=False)
    p.add_argument("--max-scale", type=_positive_float, default=math.inf, help="largest filtration value")
    p.add_argument("--format", choices=("text", "json", "svg"), default="text")
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--keep-zero-length", action="store_true")
    p.add_argument("--representatives", action="store_true", help="include cycles in JSON output")
    p.set_defaults(func=cmd_barcodes)

    p = sub.add_parser("obstructions", parents=[common], help="persistent cycles alive at a threshold")
    _add_matrix_input(p)
    scale_options(p, threshold=True)
    p.add_argument("--max-scale", type=_positive_float, default=math.inf)
    p.add_argument("--min-persistence", type=_positive_float, default=0.0)
    p.add_argument("--voids", action="store_true", help="also report 2-dimensional bars")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_obstructions)

    p = sub.add_parser("calibrate", parents=[common], help="fit weights by grid search")
    _add_agent_input(p)
    p.add_argument("--grid", type=float, default=0.05, metavar="STEP")
    p.add_argument("--labels", metavar="FILE", help="labelled pairs (default: recorded collaborations)")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_calibrate)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr, force=True)
    logging.captureWarnings(True)
    if args.seed is not None:
        log.warning("--seed is accepted for forward compatibility and ignored")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"socioplex {args.command}: error: {exc}\n")
        return 2
    except SocioplexError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    finally:
        logging.captureWarnings(False)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
