"""Command-line interface.

Subcommands: score, distances, heatmap, correlate, validate. Primary output
is deterministic CSV (or JSON) on stdout or --out; score and heatmap runs
that write to a file also render a matplotlib figure next to it unless
--no-figure is given.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .distances import DEFAULT_TOKEN_PATTERN, ExtractionScheme, validate_matrix
from .errors import DegenerateInputError
from .io import (
    read_matrix_csv,
    read_score_csv,
    read_texts,
    read_vectors_csv,
    write_correlations,
    write_heatmap_csv,
    write_matrix_csv,
    write_score_csv,
    write_score_json,
)
from .pipeline import (
    build_matrix,
    correlations,
    heatmap_grid,
    run_pipeline,
    with_day_precision,
)
from .potentials import parse_potential
from .scores import ScoreConfig

EXTRACT_MODES = {
    "word": "word_frequency",
    "char": "char_frequency",
    "levenshtein": "levenshtein",
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except BrokenPipeError:
        return 1
    except (DegenerateInputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="originality",
        description=(
            "Score how original each asset in a collection is. Assets repel "
            "each other like charges: crowded assets score near 0, average "
            "ones near 1, remote ones higher."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    score = sub.add_parser("score", help="score every asset in a dataset")
    _add_input_options(score)
    _add_potential_option(score)
    variant = score.add_argument_group("score variant (default: standard)")
    variant.add_argument(
        "--mean-p",
        type=float,
        default=None,
        metavar="P",
        help="generalized-mean exponent, p <= 0 (write --mean-p=-1; -inf compares minimum distances)",
    )
    variant.add_argument(
        "--j-nearest",
        type=int,
        default=None,
        metavar="J",
        help="restrict every asset to its J closest neighbours",
    )
    variant.add_argument(
        "--include-self-row",
        action="store_true",
        help="with --j-nearest, count asset k's own row in the numerator",
    )
    variant.add_argument(
        "--bounded", action="store_true", help="map scores onto (0, 1) via o/(1+o)"
    )
    score.add_argument(
        "--time-ordered",
        action="store_true",
        help="score each asset against strictly earlier-dated assets only",
    )
    score.add_argument(
        "--date-precision",
        choices=("day", "exact"),
        default="day",
        help="how finely dates are compared in time-ordered mode (default: day)",
    )
    score.add_argument("--normalize", action="store_true", help="divide distances by their mean first")
    score.add_argument(
        "--dedupe",
        action="store_true",
        help="collapse zero-distance duplicates to one representative before scoring",
    )
    score.add_argument(
        "--on-collision",
        choices=("zero", "error"),
        default="zero",
        help="what a zero distance to a comparand does to a score (default: zero)",
    )
    score.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_output_options(score, figures=True)
    score.set_defaults(handler=_cmd_score)

    distances = sub.add_parser("distances", help="write the distance matrix for a dataset")
    _add_input_options(distances)
    distances.add_argument(
        "--normalize", action="store_true", help="divide distances by their mean"
    )
    _add_output_options(distances, figures=False)
    distances.set_defaults(handler=_cmd_distances)

    heatmap = sub.add_parser("heatmap", help="score a probe on a grid over fixed 2D points")
    heatmap.add_argument("--vectors", required=True, metavar="PATH", help="2D feature vectors CSV")
    _add_potential_option(heatmap)
    heatmap.add_argument(
        "--bounds",
        metavar="X0,X1,Y0,Y1",
        default=None,
        help="grid box (default: data bounding box plus a 10%% margin)",
    )
    heatmap.add_argument(
        "--resolution",
        metavar="NX[,NY]",
        default="100",
        help="cells per axis (default: 100)",
    )
    _add_output_options(heatmap, figures=True)
    heatmap.set_defaults(handler=_cmd_heatmap)

    correlate = sub.add_parser("correlate", help="correlate two score reports by asset id")
    correlate.add_argument("report_a", metavar="A.csv")
    correlate.add_argument("report_b", metavar="B.csv")
    correlate.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_output_options(correlate, figures=True)
    correlate.set_defaults(handler=_cmd_correlate)

    validate = sub.add_parser("validate", help="check a dataset's distance matrix")
    _add_input_options(validate)
    validate.set_defaults(handler=_cmd_validate)

    return parser


def _add_input_options(p: argparse.ArgumentParser) -> None:
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--matrix", metavar="PATH", help="square distance-matrix CSV")
    source.add_argument("--vectors", metavar="PATH", help="feature vectors CSV")
    source.add_argument("--texts", metavar="PATH", help="text corpus (lines or id,text CSV)")
    p.add_argument(
        "--extract",
        choices=sorted(EXTRACT_MODES),
        help="how --texts becomes geometry (required with --texts)",
    )
    p.add_argument("--keep-case", action="store_true", help="skip lowercasing before extraction")
    p.add_argument(
        "--include-whitespace",
        action="store_true",
        help="count whitespace characters in char extraction",
    )
    p.add_argument(
        "--token-pattern",
        metavar="REGEX",
        default=None,
        help=f"word tokenizer override (default: {DEFAULT_TOKEN_PATTERN!r})",
    )


def _add_potential_option(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--potential",
        default="coulomb",
        metavar="SPEC",
        help="coulomb, screened:ALPHA or power:N (default: coulomb)",
    )


def _add_output_options(p: argparse.ArgumentParser, figures: bool) -> None:
    p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    if figures:
        group = p.add_mutually_exclusive_group()
        group.add_argument(
            "--figure",
            nargs="?",
            const="",
            default=None,
            metavar="PATH",
            help="render a figure (default path: --out with a .png suffix)",
        )
        group.add_argument(
            "--no-figure", action="store_true", help="skip the figure even when --out is set"
        )


def _load(args):
    if args.matrix:
        dataset = read_matrix_csv(args.matrix)
    elif args.vectors:
        dataset = read_vectors_csv(args.vectors)
    else:
        dataset = read_texts(args.texts)
    scheme = None
    if args.texts:
        if not args.extract:
            raise ValueError("--texts needs --extract word|char|levenshtein")
        options = {
            "mode": EXTRACT_MODES[args.extract],
            "lowercase": not args.keep_case,
            "include_whitespace": args.include_whitespace,
        }
        if args.token_pattern:
            options["token_pattern"] = args.token_pattern
        scheme = ExtractionScheme(**options)
    elif args.extract:
        raise ValueError("--extract only applies to --texts input")
    return dataset, scheme


def _score_config(args) -> ScoreConfig:
    chosen = [
        name
        for name, active in (
            ("generalized_mean", args.mean_p is not None),
            ("j_nearest", args.j_nearest is not None),
            ("bounded", args.bounded),
        )
        if active
    ]
    if len(chosen) > 1:
        raise ValueError("choose at most one of --mean-p, --j-nearest, --bounded")
    variant = chosen[0] if chosen else "standard"
    if args.include_self_row and variant != "j_nearest":
        raise ValueError("--include-self-row only applies with --j-nearest")
    return ScoreConfig(
        potential=parse_potential(args.potential),
        variant=variant,
        p=args.mean_p if args.mean_p is not None else -1.0,
        J=args.j_nearest if args.j_nearest is not None else 1,
        time_ordered=args.time_ordered,
        include_self_row=args.include_self_row,
        collision_policy="error" if args.on_collision == "error" else "score_zero",
    )


def _figure_path(args, out: Path | None, stem: str) -> Path | None:
    if getattr(args, "no_figure", False):
        return None
    requested = getattr(args, "figure", None)
    if requested is None:
        target = out.with_suffix(".png") if out is not None else None
    elif requested == "":
        target = out.with_suffix(".png") if out is not None else Path(f"originality-{stem}.png")
    else:
        target = Path(requested)
    if target is not None and target == out:
        target = out.with_name(out.stem + "-figure.png")
    return target


def _cmd_score(args) -> int:
    dataset, scheme = _load(args)
    config = _score_config(args)
    if args.time_ordered and args.date_precision == "day":
        dataset = with_day_precision(dataset)
    result = run_pipeline(
        dataset, config, scheme, normalize=args.normalize, dedupe=args.dedupe
    )
    out = Path(args.out) if args.out else None
    if args.format == "json":
        write_score_json(result.report, out)
    else:
        write_score_csv(result.report, out)
    figure = _figure_path(args, out, "scores")
    if figure is not None:
        from . import plots

        plots.save_score_figure(result.report, figure)
        print(f"figure written to {figure}", file=sys.stderr)
    return 0


def _cmd_distances(args) -> int:
    dataset, scheme = _load(args)
    matrix = build_matrix(dataset, scheme, normalize=args.normalize)
    write_matrix_csv(matrix, Path(args.out) if args.out else None)
    return 0


def _cmd_heatmap(args) -> int:
    dataset = read_vectors_csv(args.vectors)
    rows = np.array([asset.vector for asset in dataset.assets], dtype=float)
    if rows.ndim != 2 or rows.shape[1] != 2:
        raise ValueError("heatmap needs exactly two feature columns")
    bounds = _parse_bounds(args.bounds) if args.bounds else _default_bounds(rows)
    grid = heatmap_grid(
        rows, bounds, _parse_resolution(args.resolution), parse_potential(args.potential)
    )
    out = Path(args.out) if args.out else None
    write_heatmap_csv(grid, out)
    figure = _figure_path(args, out, "heatmap")
    if figure is not None:
        from . import plots

        plots.save_heatmap_figure(grid, figure, points=rows)
        print(f"figure written to {figure}", file=sys.stderr)
    return 0


def _cmd_correlate(args) -> int:
    series_a = read_score_csv(args.report_a)
    series_b = dict(read_score_csv(args.report_b))
    paired = [(score, series_b[asset_id]) for asset_id, score in series_a if asset_id in series_b]
    if len(paired) < 3:
        raise ValueError("need at least three assets scored in both reports")
    a = [pair[0] for pair in paired]
    b = [pair[1] for pair in paired]
    stats = dict(correlations(a, b))
    stats["n"] = len(paired)
    out = Path(args.out) if args.out else None
    write_correlations(stats, out, fmt=args.format)
    figure = _figure_path(args, out, "correlation")
    if figure is not None:
        from . import plots

        plots.save_correlation_figure(
            a, b, (Path(args.report_a).stem, Path(args.report_b).stem), figure
        )
        print(f"figure written to {figure}", file=sys.stderr)
    return 0


def _cmd_validate(args) -> int:
    dataset, scheme = _load(args)
    matrix = build_matrix(dataset, scheme, validate=False)
    report = validate_matrix(matrix)
    print(f"assets: {report.n}")
    if report.clean:
        print("ok")
        return 0
    for issue in report.issues():
        print(issue)
    return 1


def _parse_bounds(text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise ValueError("--bounds needs four numbers: X0,X1,Y0,Y1")
    x0, x1, y0, y1 = (float(p) for p in parts)
    return ((x0, x1), (y0, y1))


def _default_bounds(rows: np.ndarray):
    x0, y0 = rows.min(axis=0)
    x1, y1 = rows.max(axis=0)
    margin_x = 0.1 * (x1 - x0) or 1.0
    margin_y = 0.1 * (y1 - y0) or 1.0
    return (
        (float(x0 - margin_x), float(x1 + margin_x)),
        (float(y0 - margin_y), float(y1 + margin_y)),
    )


def _parse_resolution(text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        return (int(parts[0]), int(parts[0]))
    if len(parts) == 2:
        return (int(parts[0]), int(parts[1]))
    raise ValueError("--resolution needs NX or NX,NY")


if __name__ == "__main__":
    sys.exit(main())
