"""Command line: single points, sweeps, figure tables and the verification suite.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from . import correlations as corr
from . import oracle, states, verify
from .states import PartitionSpec, Scheme

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

COLUMNS = ["scheme", "n", "k", "s", "omega", "branch", "closest_param",
           "T2", "D2", "C2", "L2", "residual"]

FIGURES = {
    "T2": "Figure 1: total pairwise correlation T2 versus overlap s",
    "D2": "Figure 2: pairwise quantum correlation (geometric discord) D2 versus overlap s",
    "C2": "Figure 3: pairwise classical correlation C2 versus overlap s",
    "L2": "Figure 4: additivity defect L2 = D2 + C2 - T2 versus overlap s",
}


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """17 significant digits: round-trips every double."""
    if x is None:
        return ""
    if isinstance(x, (int, str)):
        return str(x)
    return format(float(x), ".17g")


def row_of(rep: corr.CorrelationReport) -> dict:
    return {
        "scheme": rep.scheme.value,
        "n": rep.n,
        "k": rep.k,
        "s": rep.s,
        "omega": rep.omega,
        "branch": rep.branch.value,
        "closest_param": rep.closest_param.value,
        "T2": rep.t2,
        "D2": rep.d2,
        "C2": rep.c2,
        "L2": rep.l2,
        "residual": rep.residual,
    }


def to_csv(rows: Sequence[dict], columns: Sequence[str], comment: Optional[str] = None) -> str:
    buf = io.StringIO()
    if comment:
        buf.write(f"# {comment}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row[c]) for c in columns])
    return buf.getvalue()


def to_json(payload) -> str:
    # json writes floats with repr(), which is already the shortest round-trip form
    return json.dumps(payload, indent=2) + "\n"


def emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# ---------------------------------------------------------------- validation


def partition_from_args(scheme: str, n: int, k: Optional[int]) -> PartitionSpec:
    try:
        return PartitionSpec(Scheme(scheme), n, k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def overlap_from_args(s: Optional[float], omega: Optional[float]) -> float:
    if (s is None) == (omega is None):
        raise UsageError("exactly one of --s and --omega is required")
    try:
        if omega is not None:
            return states.overlap_from_omega(omega).s
        return states.check_overlap(s)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def sweep_grid(s_start: float, s_end: float, steps: int) -> list[float]:
    if steps < 2:
        raise UsageError(f"steps must be >= 2, got {steps}")
    if not 0.0 <= s_start <= s_end <= 1.0:
        raise UsageError(f"need 0 <= s_start <= s_end <= 1, got [{s_start}, {s_end}]")
    width = s_end - s_start
    return [min(s_end, s_start + i * width / (steps - 1)) for i in range(steps)]


def _report_row(args) -> dict:
    spec, s = args
    return row_of(corr.report(spec, s))


def compute_rows(spec: PartitionSpec, grid: Sequence[float], jobs: int = 1) -> list[dict]:
    tasks = [(spec, s) for s in grid]
    if jobs <= 1:
        return [_report_row(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map keeps input order, so output is identical to the serial run
        return list(pool.map(_report_row, tasks, chunksize=16))


# ------------------------------------------------------------------ commands


def cmd_point(args) -> int:
    spec = partition_from_args(args.scheme, args.n, args.k)
    s = overlap_from_args(args.s, args.omega)
    rep = corr.report(spec, s)
    row = row_of(rep)
    if args.format == "csv":
        emit(to_csv([row], COLUMNS), args.out)
    elif args.format == "json":
        emit(to_json(rep.as_dict()), args.out)
    else:
        lines = [f"{key}={fmt(value)}" for key, value in row.items()]
        if rep.minus_values is not None:
            for tag, values in (("minus", rep.minus_values), ("plus", rep.plus_values)):
                lines += [f"{q}_{tag}={fmt(v)}" for q, v in zip(("D2", "C2", "L2"), values)]
        emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.scheme == "mixed" and args.k is not None:
        raise UsageError("k must be absent for the mixed scheme")
    spec = partition_from_args(args.scheme, args.n, args.k)
    grid = sweep_grid(args.s_start, args.s_end, args.steps)
    rows = compute_rows(spec, grid, args.jobs)
    if args.format == "json":
        emit(to_json(rows), args.out)
    else:
        emit(to_csv(rows, COLUMNS), args.out)
    return EXIT_OK


def cmd_plotdata(args) -> int:
    specs = [partition_from_args("mixed", n, None) for n in args.n]
    grid = sweep_grid(0.0, 1.0, args.steps)
    key = args.quantity
    series = {spec.n: [row[key] for row in compute_rows(spec, grid, args.jobs)] for spec in specs}
    columns = ["s"] + [f"n={n}" for n in series]
    rows = [{"s": s, **{f"n={n}": series[n][i] for n in series}} for i, s in enumerate(grid)]
    if args.format == "json":
        payload = {"figure": FIGURES[key], "quantity": key, "s": grid,
                   "series": {str(n): v for n, v in series.items()}}
        emit(to_json(payload), args.out)
    else:
        emit(to_csv(rows, columns, comment=FIGURES[key]), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.tolerance < 0:
        raise UsageError(f"tolerance must be >= 0, got {args.tolerance}")
    if args.grid_density < 1:
        raise UsageError(f"grid-density must be >= 1, got {args.grid_density}")
    results = verify.run_all(args.grid_density, args.seed, args.tolerance, args.starts)
    width = max(len(r.name) for r in results)
    out = [f"{'check':<{width}}  {'status':<6}  {'cases':>6}  {'worst':>10}  {'tolerance':>10}  {'time':>7}"]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        out.append(f"{r.name:<{width}}  {status:<6}  {r.cases:>6}  {r.worst:>10.3e}  "
                   f"{r.tolerance:>10.3e}  {r.seconds:>6.2f}s")
    failed = [r for r in results if not r.passed]
    if failed:
        first = failed[0]
        out.append(f"FAILED {first.name}: {first.first_failure}")
        for r in failed[1:]:
            out.append(f"also failed {r.name}: {r.first_failure}")
    else:
        out.append(f"all {len(results)} checks passed")
    emit("\n".join(out) + "\n", args.out)
    return EXIT_FAILED if failed else EXIT_OK


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcorr",
        description="Pairwise correlations (T2, D2, C2, L2) of balanced n-qubit coherent-state superpositions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("csv", "json")):
        p.add_argument("--format", choices=formats, default=formats[0])
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--seed", type=int, default=oracle.DEFAULT_SEED)

    p = sub.add_parser("point", help="report all correlations at one overlap")
    p.add_argument("--scheme", choices=[s.value for s in Scheme], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--omega", type=float, default=None)
    common(p, formats=("csv", "json", "text"))
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("sweep", help="tabulate a report over an overlap grid")
    p.add_argument("--scheme", choices=[s.value for s in Scheme], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--s-start", type=float, default=0.0)
    p.add_argument("--s-end", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("plotdata", help="figure tables for the traced-pair scheme")
    p.add_argument("--quantity", choices=sorted(FIGURES), required=True)
    p.add_argument("--n", type=int, nargs="+", default=[2, 3, 4, 5, 6])
    p.add_argument("--steps", type=int, default=201)
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_plotdata)

    p = sub.add_parser("verify", help="run the invariant and oracle suite")
    p.add_argument("--grid-density", type=int, default=9,
                   help="interior overlap points for the oracle grid (9: s = 0.1..0.9)")
    p.add_argument("--tolerance", type=float, default=1.0,
                   help="multiplier applied to every check tolerance")
    p.add_argument("--starts", type=int, default=oracle.DEFAULT_STARTS)
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=int, default=oracle.DEFAULT_SEED)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"{parser.prog} {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
