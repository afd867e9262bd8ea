"""Command-line front end: compute norms, run verification suites, benchmark.

Exit codes are a stable contract: 0 on success, 1 when a check or
computation fails, 2 on usage or validation problems. All numeric output
uses 17 significant digits and no locale formatting.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
import time

import numpy as np

from .corpus import load_manifest
from .dyadic import dyadic_norm
from .exponents import SpaceSpec
from .grid import default_grid, load_field, make_grid
from .kernel import heat_extension
from .norms import (
    besov_norm,
    huang_norm,
    t_norm,
    triebel_norm,
    vv_norm,
    z_amenta_norm,
    z_norm,
)
from .report import (
    fmt17,
    render_bench_figure,
    render_overview_figure,
    write_reports_csv,
    write_summary,
)
from .verify import SUITES, VerifyContext, run_suites
from .whitney import DEFAULT_WINDOW, WhitneyParams, box_average, box_average_fast

SPACES = ("Z", "T", "besov", "triebel", "dyadic", "amenta", "huang", "vv")


class _UsageError(Exception):
    pass


def _parse_exponent(text: str, name: str) -> float:
    try:
        val = float(text)
    except ValueError:
        raise _UsageError(f"invalid {name}: {text!r}")
    return val


def _parse_whitney(text: str) -> WhitneyParams:
    parts = text.split(",")
    if len(parts) != 3:
        raise _UsageError(f"--whitney expects a,b,c, got {text!r}")
    try:
        a, b, c = (float(p) for p in parts)
        return WhitneyParams(a, b, c)
    except ValueError as exc:
        raise _UsageError(f"invalid --whitney: {exc}")


def _jobs_default() -> int:
    env = os.environ.get("WHITNEY_JOBS", "")
    try:
        return max(0, int(env)) if env else 0
    except ValueError:
        return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="scalenorm",
        description="Scale-space norms on the discretized upper half-space.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    ap_norm = sub.add_parser("norm", help="compute one norm value")
    ap_norm.add_argument("--space", required=True, choices=SPACES)
    ap_norm.add_argument("--p", required=True)
    ap_norm.add_argument("--q", default="2")
    ap_norm.add_argument("--r", default="2")
    ap_norm.add_argument("--beta", default="0")
    ap_norm.add_argument("--whitney", default=None, metavar="a,b,c")
    ap_norm.add_argument("--input", default=None, help="HSF1 field file")
    ap_norm.add_argument("--entry", default=None, help="corpus entry id")
    ap_norm.add_argument("--manifest", default=None)
    ap_norm.add_argument("--csv", default=None, help="append a result row here")

    ap_ver = sub.add_parser("verify", help="run verification suites")
    ap_ver.add_argument("--only", action="append", default=None,
                        help="suite name; repeatable, or comma separated")
    ap_ver.add_argument("--out", default="verify_out")
    ap_ver.add_argument("--manifest", default=None)
    ap_ver.add_argument("--jobs", type=int, default=None)

    ap_bench = sub.add_parser("bench", help="time naive vs fast box averages")
    ap_bench.add_argument("--sizes", default="256,1024,4096",
                          help="comma-separated n_x values")
    ap_bench.add_argument("--out", default="bench_out")
    return ap


def _realize_entry(entry_id: str, manifest_path, grid):
    from .corpus import generate_boundary, generate_halfspace

    _, entries = load_manifest(manifest_path)
    match = [e for e in entries if e.id == entry_id]
    if not match:
        raise _UsageError(f"unknown corpus entry {entry_id!r}")
    entry = match[0]
    boundary = generate_boundary(entry, grid) if entry.id.startswith("b") else None
    if boundary is not None:
        return boundary, heat_extension(boundary)
    return None, generate_halfspace(entry, grid)


def cmd_norm(args) -> int:
    p = _parse_exponent(args.p, "--p")
    q = _parse_exponent(args.q, "--q")
    r = _parse_exponent(args.r, "--r")
    beta = _parse_exponent(args.beta, "--beta")
    if args.space == "T" and math.isinf(p):
        raise _UsageError("tent p=inf unsupported")
    try:
        spec = SpaceSpec(p=p, q=q, r=r, beta=beta)
    except ValueError as exc:
        raise _UsageError(str(exc))
    window = _parse_whitney(args.whitney) if args.whitney else DEFAULT_WINDOW
    if (args.input is None) == (args.entry is None):
        raise _UsageError("exactly one of --input or --entry is required")

    boundary = None
    if args.input is not None:
        try:
            field = load_field(args.input)
        except (OSError, ValueError) as exc:
            raise _UsageError(f"cannot read {args.input!r}: {exc}")
        source = args.input
    else:
        if args.manifest is not None and not os.path.exists(args.manifest):
            raise _UsageError(f"manifest not found: {args.manifest!r}")
        boundary, field = _realize_entry(args.entry, args.manifest, default_grid())
        source = args.entry

    if args.space in ("besov", "triebel"):
        if boundary is None:
            raise _UsageError(
                f"space {args.space} needs boundary data: use --entry with a "
                "boundary corpus id"
            )
        if args.space == "besov":
            value = besov_norm(boundary, p, q, beta)
        else:
            value = triebel_norm(boundary, p, q, beta)
    elif args.space == "Z":
        value = z_norm(field, spec, window)
    elif args.space == "T":
        value = t_norm(field, spec, window)
    elif args.space == "dyadic":
        value = dyadic_norm(field, spec)
    elif args.space == "amenta":
        value = z_amenta_norm(field, p, r, beta, window)
    elif args.space == "huang":
        value = huang_norm(field, spec)
    else:
        value = vv_norm(field, spec, window)

    print(fmt17(value))
    if args.csv:
        need_header = not (os.path.exists(args.csv) and os.path.getsize(args.csv) > 0)
        with open(args.csv, "a", encoding="ascii", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            if need_header:
                writer.writerow(["space", "p", "q", "r", "beta", "input", "value"])
            writer.writerow(
                [args.space, fmt17(p), fmt17(q), fmt17(r), fmt17(beta), source,
                 fmt17(value)]
            )
    return 0


def cmd_verify(args) -> int:
    names = None
    if args.only:
        names = []
        for chunk in args.only:
            names.extend(n for n in chunk.split(",") if n)
        unknown = [n for n in names if n not in SUITES]
        if unknown:
            raise _UsageError(
                f"unknown suite(s): {', '.join(unknown)}; available: "
                + ", ".join(SUITES)
            )
    if args.manifest is not None and not os.path.exists(args.manifest):
        raise _UsageError(f"manifest not found: {args.manifest!r}")
    jobs = args.jobs if args.jobs is not None else _jobs_default()
    os.makedirs(args.out, exist_ok=True)
    ctx = VerifyContext(manifest_path=args.manifest, jobs=jobs)
    results = run_suites(ctx, names)

    reports = [rep for res in results for rep in res.reports]
    write_reports_csv(reports, os.path.join(args.out, "results.csv"))
    summary = []
    for res in results:
        summary.append(
            {
                "suite": res.name,
                "passed": bool(res.passed),  # suites may hand back numpy bools
                "detail": res.detail,
                "checks": [rep.summary_dict() for rep in res.reports],
            }
        )
    write_summary(summary, os.path.join(args.out, "summary.json"))
    render_overview_figure(reports, os.path.join(args.out, "overview.png"))

    failures = []
    for res in results:
        mark = "pass" if res.passed else "FAIL"
        print(f"[{mark}] {res.name}: {res.detail}")
        if not res.passed:
            failures.append(res.name)
    if failures:
        print(f"failed suites: {', '.join(failures)}", file=sys.stderr)
        return 1
    print(f"all {len(results)} suites passed")
    return 0


_BENCH_SCRIPT = """\
# gnuplot script for the box-average benchmark
set datafile separator ","
set logscale xy
set xlabel "n_x"
set ylabel "time (ns)"
set key left top
plot "bench.csv" skip 1 using 1:3 with linespoints title "naive", \\
     "bench.csv" skip 1 using 1:4 with linespoints title "fast"
"""


def cmd_bench(args) -> int:
    sizes = [s for s in args.sizes.split(",") if s]
    if not sizes:
        raise _UsageError("empty --sizes list")
    try:
        n_values = [int(s) for s in sizes]
    except ValueError:
        raise _UsageError(f"invalid --sizes: {args.sizes!r}")
    os.makedirs(args.out, exist_ok=True)
    _, entries = load_manifest(None)
    entry = next(e for e in entries if e.id == "h03")
    rows = []
    for n_x in n_values:
        try:
            grid = make_grid(1, 64.0, n_x, 1.0 / 16.0, 8.0, 8)
        except ValueError as exc:
            raise _UsageError(f"bad grid size {n_x}: {exc}")
        from .corpus import generate_halfspace

        F = generate_halfspace(entry, grid)
        t0 = time.perf_counter_ns()
        slow = box_average(F, 2.0, 0.0)
        t1 = time.perf_counter_ns()
        fast = box_average_fast(F, 2.0, 0.0)
        t2 = time.perf_counter_ns()
        scale = np.maximum(np.abs(slow.values), 1e-300)
        dev = float(np.max(np.abs(fast.values - slow.values) / scale))
        rows.append(
            {
                "n_x": n_x,
                "J": grid.J,
                "naive_ns": t1 - t0,
                "fast_ns": t2 - t1,
                "max_rel_diff": dev,
            }
        )
    csv_path = os.path.join(args.out, "bench.csv")
    with open(csv_path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["n_x", "J", "naive_ns", "fast_ns", "max_rel_diff"])
        for row in rows:
            writer.writerow(
                [row["n_x"], row["J"], row["naive_ns"], row["fast_ns"],
                 fmt17(row["max_rel_diff"])]
            )
    with open(os.path.join(args.out, "bench_plot.gp"), "w", encoding="ascii") as fh:
        fh.write(_BENCH_SCRIPT)
    render_bench_figure(rows, os.path.join(args.out, "bench.png"))
    for row in rows:
        print(
            f"n_x={row['n_x']}: naive {row['naive_ns']} ns, fast "
            f"{row['fast_ns']} ns, max rel diff {fmt17(row['max_rel_diff'])}"
        )
    return 0


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "norm":
            return cmd_norm(args)
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_bench(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # module-level precondition violations surface as validation errors
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # computation failure
        print(f"failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
