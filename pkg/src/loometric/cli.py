"""Command-line surface.

Exit codes: 0 success / affirmative, 1 structured negative (axiom violation,
non-injective input, infeasible embedding, failed check), 2 usage or I/O error.
Machine-readable JSON goes to --out or stdout; diagnostics go to stderr,
controlled by LOOMETRIC_LOG (error, info, debug).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import io as lio
from .embed import (
    Embedding,
    EpsTooLarge,
    NotInjective,
    embed_line_branching,
    perturb_to_injective,
    solve_loose_embedding,
)
from .experiment import experiment_genericity, report_to_json
from .gh import (
    EmptySpace,
    EmptySubset,
    NotACover,
    NotAPartition,
    check_dimension_witness,
    check_mnm,
    cover_order,
    find_mnm_partition,
    gh_exact,
)
from .obstruction import TooSmall, dim_lower_bound, max_regular_simplex
from .space import (
    EmptyThresholds,
    MetricValidationError,
    distance_pattern,
    isolation_strip,
    to_fraction,
)

log = logging.getLogger("loometric")


def _configure_logging() -> None:
    level = os.environ.get("LOOMETRIC_LOG", "error").lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(stream=sys.stderr, level=levels.get(level, logging.ERROR),
                        format="%(levelname)s %(name)s: %(message)s")


def _emit(args, payload: dict) -> None:
    text = json.dumps(payload, indent=2)
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _parse_grid(text: str) -> list[tuple[int, int]]:
    grid = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        n_str, _, m_str = part.partition(":")
        grid.append((int(n_str), int(m_str)))
    if not grid:
        raise ValueError("empty grid")
    return grid


def cmd_validate(args) -> int:
    space = lio.load_space(args.path, args.format)
    _emit(args, {"valid": True, "points": space.n,
                 "diameter": lio.format_rational(space.diameter())})
    return 0


def cmd_pattern(args) -> int:
    space = lio.load_space(args.path, args.format)
    tol = to_fraction(args.tolerance) if args.tolerance else None
    pattern = distance_pattern(space, tolerance=tol)
    _emit(args, lio.pattern_to_json(space, pattern))
    return 0


def cmd_simplex(args) -> int:
    space = lio.load_space(args.path, args.format)
    try:
        witness = max_regular_simplex(space)
    except TooSmall as exc:
        _emit(args, {"error": {"kind": "too-small", "message": str(exc)}})
        return 1
    payload = lio.simplex_to_json(witness)
    payload["dim_lower_bound"] = dim_lower_bound(space)
    _emit(args, payload)
    return 0


def _maybe_svg(args, space, emb: Embedding) -> None:
    if getattr(args, "svg", None):
        from .plotting import save_embedding_plot

        save_embedding_plot(space, emb, args.svg)
        log.info("figure written to %s", args.svg)


def cmd_embed_line(args) -> int:
    space = lio.load_space(args.path, args.format)
    try:
        emb = embed_line_branching(space, args.seed)
    except NotInjective as exc:
        _emit(args, {"error": {"kind": "not-injective", "message": str(exc)}})
        return 1
    _emit(args, lio.embedding_to_json(emb))
    _maybe_svg(args, space, emb)
    return 0


def cmd_embed(args) -> int:
    space = lio.load_space(args.path, args.format)
    top = args.escalate_to if args.escalate_to else args.dim
    if top < args.dim:
        print("error: --escalate-to must be >= --dim", file=sys.stderr)
        return 2
    if args.svg and top > 2:
        print("error: --svg requires a target dimension of at most 2", file=sys.stderr)
        return 2
    result = None
    for dim in range(args.dim, top + 1):
        result = solve_loose_embedding(
            space, dim, margin=args.margin, max_iters=args.max_iters,
            restarts=args.restarts, seed=args.seed)
        if isinstance(result, Embedding):
            break
        log.info("dimension %d infeasible (%s)", dim, result.reason)
    if isinstance(result, Embedding):
        _emit(args, lio.embedding_to_json(result))
        _maybe_svg(args, space, result)
        return 0
    _emit(args, {"feasible": False, "report": lio.infeasible_to_json(result)})
    return 1


def cmd_perturb(args) -> int:
    space = lio.load_space(args.path, args.format)
    try:
        perturbed = perturb_to_injective(space, args.eps, args.seed)
    except EpsTooLarge as exc:
        _emit(args, {"error": {"kind": "eps-too-large", "message": str(exc)}})
        return 1
    _emit(args, lio.space_to_json(perturbed))
    return 0


def cmd_gh(args) -> int:
    X = lio.load_space(args.path_a, args.format)
    Y = lio.load_space(args.path_b, args.format)
    result = gh_exact(X, Y, budget=args.budget)
    _emit(args, lio.gh_result_to_json(result))
    return 0


def cmd_mnm(args) -> int:
    space = lio.load_space(args.path, args.format)
    if args.partition:
        blocks = lio.load_blocks(args.partition, "blocks")
        ok, violation = check_mnm(space, blocks, args.N, args.M)
        if ok:
            _emit(args, {"ok": True})
            return 0
        _emit(args, {"ok": False, "violation": lio.render(violation)})
        return 1
    witness = find_mnm_partition(space, args.N, args.M)
    if witness is None:
        _emit(args, {"found": False, "search_space": "dendrogram-cuts"})
        return 1
    _emit(args, {"found": True, "witness": lio.partition_witness_to_json(witness)})
    return 0


def cmd_cover_order(args) -> int:
    space = lio.load_space(args.path, args.format)
    cover = lio.load_blocks(args.cover, "cover")
    try:
        order = cover_order(space, cover)
    except NotACover as exc:
        _emit(args, {"error": {"kind": "not-a-cover", "message": str(exc)}})
        return 1
    payload = {"order": order}
    if args.check_dim is not None:
        if args.M is None or args.N is None:
            print("error: --check-dim requires --N and --M", file=sys.stderr)
            return 2
        ok, violation = check_dimension_witness(space, cover, args.N, args.M, args.check_dim)
        payload["dimension_witness"] = {"ok": ok}
        if violation is not None:
            payload["dimension_witness"]["violation"] = lio.render(violation)
        _emit(args, payload)
        return 0 if ok else 1
    _emit(args, payload)
    return 0


def cmd_strip(args) -> int:
    space = lio.load_space(args.path, args.format)
    try:
        thresholds = [to_fraction(t) for t in args.thresholds.split(",") if t.strip()]
        filtration = isolation_strip(space, thresholds)
    except (EmptyThresholds, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(args, lio.strip_to_json(filtration))
    return 0


def cmd_experiment(args) -> int:
    try:
        grid = _parse_grid(args.grid)
    except ValueError as exc:
        print(f"error: bad --grid: {exc}", file=sys.stderr)
        return 2
    report = experiment_genericity(args.trials, args.points, args.eps, grid,
                                   args.seed, dim=args.dim)
    payload = report_to_json(report)
    _emit(args, payload)
    if args.report_dir:
        from .plotting import save_experiment_report

        paths = save_experiment_report(report, args.report_dir)
        report_json = Path(args.report_dir) / "report.json"
        report_json.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        for name, p in {**paths, "report_json": report_json}.items():
            log.info("%s written to %s", name, p)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loometric",
        description="analyze finite metric spaces: patterns, embeddings, "
                    "Gromov-Hausdorff distance, witness sets")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text, needs_space=True):
        p = sub.add_parser(name, help=help_text)
        if needs_space:
            p.add_argument("path", help="space file (JSON or CSV)")
            p.add_argument("--format", choices=["json", "csv"], default=None,
                           help="override format detection by suffix")
        p.add_argument("--out", default=None, help="write the JSON result to a file")
        p.set_defaults(handler=handler)
        return p

    add("validate", cmd_validate, "check the metric axioms")

    p = add("pattern", cmd_pattern, "distance-equality classes of point pairs")
    p.add_argument("--tolerance", default=None,
                   help="group distances chained by gaps <= tolerance (default: exact)")

    add("simplex", cmd_simplex, "largest equidistant subset and the dimension bound")

    p = add("embed-line", cmd_embed_line, "embed an injective-distance space into R")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--svg", default=None, help="write a scatter figure (SVG)")

    p = add("embed", cmd_embed, "search for a pattern-preserving embedding into R^n")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--escalate-to", type=int, default=None,
                   help="retry with increasing dimension up to this bound")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--margin", type=float, default=None)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--max-iters", type=int, default=300)
    p.add_argument("--svg", default=None, help="write a scatter figure (SVG, dim <= 2)")

    p = add("perturb", cmd_perturb, "perturb distances to make them pairwise distinct")
    p.add_argument("--eps", required=True, help="max entrywise change (rational)")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("gh", help="Gromov-Hausdorff distance between two spaces")
    p.add_argument("path_a")
    p.add_argument("path_b")
    p.add_argument("--format", choices=["json", "csv"], default=None)
    p.add_argument("--budget", type=int, default=2_000_000,
                   help="branch-and-bound node limit (bounds proof when exceeded)")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_gh)

    p = add("mnm", cmd_mnm, "mesh/separation partition check or search")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--partition", default=None,
                   help='JSON file {"blocks": [["a","b"], ...]}; omit to search cuts')

    p = add("cover-order", cmd_cover_order, "order of a cover; optional dimension check")
    p.add_argument("--cover", required=True, help='JSON file {"cover": [["a"], ...]}')
    p.add_argument("--check-dim", type=int, default=None,
                   help="also check the dimension witness condition for this n")
    p.add_argument("--N", type=int, default=None, help="mesh bound 1/N for --check-dim")
    p.add_argument("--M", type=int, default=None, help="separation bound 1/M for --check-dim")

    p = add("strip", cmd_strip, "peel isolated points at decreasing radii")
    p.add_argument("--thresholds", required=True,
                   help="comma-separated strictly decreasing rationals, e.g. 5,1,1/2")

    p = sub.add_parser("experiment", help="seeded genericity experiment on random spaces")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", default="1:10,1:100,1:1000,2:1000",
                   help="comma-separated N:M pairs")
    p.add_argument("--dim", type=int, default=3, help="sampling hypercube dimension")
    p.add_argument("--report-dir", default=None,
                   help="write trials.csv, figures, and report.json here")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_experiment)

    return parser


def run(argv=None) -> int:
    """Parse arguments and execute; returns the process exit code."""
    _configure_logging()
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        return 0 if code == 0 else 2
    try:
        return args.handler(args)
    except MetricValidationError as exc:
        _emit(args, {"valid": False, "violation": exc.to_json()})
        return 1
    except lio.ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EmptySubset, EmptySpace, NotAPartition, NotACover) as exc:
        _emit(args, {"error": {"kind": exc.__class__.__name__, "message": str(exc)}})
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
