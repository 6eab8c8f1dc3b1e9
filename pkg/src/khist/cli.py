"""Command-line front end.

Subcommands: ``cluster`` (one run), ``compare`` (several algorithms over a
k range), ``bench`` (preset sweep with CSVs and charts), ``describe``
(per-cluster frequency tables).

Exit codes: 0 success, 1 usage error, 2 data error, 3 runtime error.
"""
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import bench
from .clustering import Algorithm, RunConfig, run
from .dataset import LoadOptions, load_csv
from .errors import DataError
from .histogram import describe
from .metrics import RunReport, reports_to_csv

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_RUNTIME = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_k(text: str) -> tuple[int, int]:
    """``N`` or ``A..B`` (inclusive)."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"invalid k range {text!r}")
    return lo, hi


def _label_col(text: str):
    if text in ("first", "last", "none"):
        return text
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected first, last, none or a column index") from None


def _threshold(text: str):
    from fractions import Fraction
    try:
        t = Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid threshold {text!r}") from None
    if not 0 <= t <= 1:
        raise argparse.ArgumentTypeError("threshold must lie in [0, 1]")
    return t


def _add_data_args(p):
    g = p.add_argument_group("data")
    g.add_argument("path", nargs="?", help="delimiter-separated data file")
    g.add_argument("--preset", choices=bench.PRESETS,
                   help="use a bundled dataset preset (path, load flags, k grid)")
    g.add_argument("--data-dir", default=None,
                   help="directory holding preset data files (default: repo data/ or $KHIST_DATA)")
    g.add_argument("--label-col", type=_label_col, default="first",
                   help="class label column: first|last|none|INDEX (default: first)")
    g.add_argument("--missing-token", default="?",
                   help="missing-value token, kept as an ordinary category (default: ?)")
    g.add_argument("--header", choices=("present", "absent"), default="absent",
                   help="whether the file starts with a header row (default: absent)")
    g.add_argument("--delimiter", default=",", help="field delimiter (default: ,)")


def _add_run_args(p):
    g = p.add_argument_group("clustering")
    g.add_argument("--max-iter", type=int, default=100, help="maximum reallocation sweeps (default: 100)")
    g.add_argument("--denominator", choices=("cluster", "dataset"), default="cluster",
                   help="normalize histogram scores by cluster size or dataset size (default: cluster)")
    g.add_argument("--threshold", type=_threshold, default=_threshold("0"),
                   help="frequency threshold in [0, 1] for --algo avft (default: 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="khist", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cluster", help="run one clustering and print its report")
    _add_data_args(p)
    _add_run_args(p)
    p.add_argument("--algo", choices=("khist", "kmodes", "avft"), default="khist",
                   help="algorithm (default: khist)")
    p.add_argument("--k", type=parse_k, default=(2, 2), help="number of clusters (default: 2)")
    p.add_argument("--format", choices=("human", "csv"), default="human", help="report format (default: human)")
    p.add_argument("--assignments", default=None,
                   help="write 'record index,cluster' rows to this file (default: not written)")
    p.add_argument("--out", default=None,
                   help="directory for assignments.csv and report files (default: none)")
    p.add_argument("--trace", action="store_true", help="print every reallocation to stderr")

    p = sub.add_parser("compare", help="compare algorithms over a k range")
    _add_data_args(p)
    _add_run_args(p)
    p.add_argument("--algos", default="khist,kmodes", help="comma-separated algorithms (default: khist,kmodes)")
    p.add_argument("--k", type=parse_k, default=None, help="k or A..B (default: preset grid, else 2)")
    p.add_argument("--format", choices=("human", "csv"), default="human", help="output format (default: human)")

    p = sub.add_parser("bench", help="run a sweep and write reports, rankings and charts")
    _add_data_args(p)
    _add_run_args(p)
    p.add_argument("--algos", default=None, help="comma-separated algorithms (default: preset's, else khist,kmodes)")
    p.add_argument("--k", type=parse_k, default=None, help="A..B k range (default: preset grid, else 2)")
    p.add_argument("--out", default=None, help="output directory (default: results/<name>)")
    p.add_argument("--no-plots", action="store_true", help="skip SVG charts")
    p.add_argument("--workers", type=int, default=1, help="worker processes for sweep cells (default: 1)")
    p.add_argument("--trace", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("describe", help="cluster, then print each cluster's value frequencies")
    _add_data_args(p)
    _add_run_args(p)
    p.add_argument("--algo", choices=("khist", "kmodes", "avft"), default="khist", help="algorithm (default: khist)")
    p.add_argument("--k", type=parse_k, default=(2, 2), help="number of clusters (default: 2)")
    return parser


def _load_options(args) -> LoadOptions:
    return LoadOptions(delimiter=args.delimiter, label_column=args.label_col,
                       missing_token=args.missing_token, header=args.header == "present")


def _spec(args, default_algos="khist,kmodes") -> bench.SweepSpec:
    if args.preset:
        spec = bench.load_preset(args.preset, args.data_dir)
        if args.path:
            spec.dataset = args.path
    elif args.path:
        spec = bench.SweepSpec(dataset=args.path, load=_load_options(args), name=Path(args.path).stem)
    else:
        raise UsageError("a data file path or --preset is required")
    k = getattr(args, "k", None)
    if k is not None:
        spec.k_start, spec.k_end = k
    algos = getattr(args, "algos", None)
    if algos:
        spec.algorithms = tuple(Algorithm.parse(a).tag for a in algos.split(",") if a.strip())
    elif not args.preset:
        spec.algorithms = tuple(default_algos.split(","))
    if args.max_iter < 1:
        raise UsageError("--max-iter must be >= 1")
    spec.max_iterations = args.max_iter
    spec.denominator = args.denominator
    return spec


def _algorithm(args) -> Algorithm:
    if args.algo == "avft":
        return Algorithm("avft", args.threshold)
    return Algorithm.parse(args.algo)


def _single(args):
    spec = _spec(args)
    if args.k[0] != args.k[1]:
        raise UsageError("this command takes a single --k value")
    dataset = load_csv(spec.dataset, spec.load)
    config = RunConfig(max_iterations=args.max_iter, denominator=args.denominator,
                       trace=getattr(args, "trace", False))
    model, stats = run(dataset, args.k[0], _algorithm(args), config)
    return spec, dataset, model, stats


def cmd_cluster(args) -> int:
    spec, dataset, model, stats = _single(args)
    if args.trace:
        for mv in stats.moves:
            print(mv.format(), file=sys.stderr)
    report = RunReport.from_run(dataset, model, stats, name=spec.name or dataset.name)
    if args.format == "csv":
        sys.stdout.write(reports_to_csv([report]))
    else:
        print(report.format_human(dataset.label_values))
    targets = []
    if args.assignments:
        targets.append(Path(args.assignments))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        targets.append(out / "assignments.csv")
        (out / "report.csv").write_text(reports_to_csv([report]))
    for path in targets:
        write_assignments(path, model.assignments)
    return EXIT_OK


def write_assignments(path, assignments) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for i, c in enumerate(assignments):
            w.writerow([i, int(c)])


def cmd_compare(args) -> int:
    spec = _spec(args)
    result = bench.run_sweep(spec)
    if args.format == "csv":
        sys.stdout.write(reports_to_csv(result.reports))
    else:
        print(f"{'algorithm':<14}{'k':>4}{'error':>10}{'iters':>7}{'swaps':>8}{'pure':>6}")
        for r in result.reports:
            print(f"{r.algorithm:<14}{r.k:>4}{float(r.error):>10.4f}{r.iterations:>7}"
                  f"{r.total_swaps:>8}{r.pure_clusters:>6}")
        print()
        print(result.ranking.format_text())
    return EXIT_OK


def cmd_bench(args) -> int:
    spec = _spec(args)
    out = Path(args.out) if args.out else Path("results") / (spec.name or "sweep")
    result = bench.run_sweep(spec, workers=args.workers)
    files = bench.write_sweep(result, out, plots=not args.no_plots)
    print(result.ranking.format_text())
    not_converged = [(r.algorithm, r.k) for r in result.reports if not r.converged]
    if not_converged:
        print(f"not converged: {not_converged}")
    print(f"wrote {len(files)} files to {out}")
    return EXIT_OK


def cmd_describe(args) -> int:
    spec, dataset, model, stats = _single(args)
    print(f"{model.algorithm.tag}, k={model.k}, iterations={stats.iterations}, swaps={stats.total_swaps}")
    for c, s in enumerate(model.summaries):
        print(describe(s, dataset.schema, title=f"cluster {c}"))
        if model.modes is not None:
            mode = [dataset.schema.decode(j, int(v)) for j, v in enumerate(model.modes[c])]
            print("  mode: " + ",".join(mode))
    return EXIT_OK


COMMANDS = {"cluster": cmd_cluster, "compare": cmd_compare, "bench": cmd_bench, "describe": cmd_describe}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        try:
            return COMMANDS[args.command](args)
        except bench.SweepError as exc:
            if isinstance(exc.__cause__, DataError):
                raise exc.__cause__ from exc
            raise
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"khist: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError, UnicodeDecodeError) as exc:
        print(f"khist: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001
        print(f"khist: runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
