"""Command-line harness: certification, single solves, benchmark suites,
and symbol sampling, all emitting CSV.

Exit codes: 0 success, 1 solver failure or failed certification,
2 usage error.  The worker pool size for benchmark rows is capped by the
SUBDIVMG_THREADS environment variable (default 1).
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .analysis import (
    TrigSymbol,
    certify_tgm,
    certify_vcycle,
    cohen_check,
    generation_degree,
)
from .errors import ParseError, SubdivMgError
from .linalg import CutVariant
from .multigrid import SmootherConfig, build_hierarchy, mgm_solve
from .problems import biharmonic_problem, iga_laplacian_problem, iga_symbol
from .symbols import binary_pseudo_spline, symbol_from_text, ternary_pseudo_spline

CSV_HEADER = ["problem", "symbol", "n", "g", "iterations", "conv_rate", "converged", "wall_time_s"]

BINARY_ROWS = [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)]
TERNARY_ROWS = [(1, 1), (2, 1), (3, 1), (3, 3), (5, 3), (5, 5)]
IGA_DEGREES = [3, 10, 16]

PLOT_SAMPLES = 512


def _symbol_from_args(args):
    """Resolve exactly one symbol specification from the parsed flags."""
    specs = []
    if getattr(args, "binary", None) is not None:
        j, l = args.binary
        specs.append((binary_pseudo_spline(j, l), f"p_{j}_{l}"))
    if getattr(args, "ternary", None) is not None:
        j, l = args.ternary
        specs.append((ternary_pseudo_spline(j, l), f"tp_{j}_{l}"))
    if getattr(args, "symbol_file", None):
        with open(args.symbol_file) as handle:
            specs.append((symbol_from_text(handle.read()), os.path.basename(args.symbol_file)))
    if len(specs) != 1:
        raise ParseError("specify exactly one of --binary J L, --ternary J L, --symbol-file")
    return specs[0]


def _coarsest_dim(g):
    """Coarsest solve sizes: 3 for arity 2, g**2 - 1 otherwise."""
    return 3 if g == 2 else g * g - 1


def _problem_symbol(problem):
    if problem == "biharmonic":
        return TrigSymbol({0: 6.0, 1: -4.0, 2: 1.0})
    if problem == "iga-laplacian":
        # collocation symbol has a second-order zero at the origin
        return TrigSymbol({0: 2.0, 1: -1.0})
    raise ParseError(f"unknown problem {problem!r}")


def _build_problem(problem, n, mu):
    if problem == "biharmonic":
        return biharmonic_problem(n)
    if problem == "iga-laplacian":
        if mu is None:
            raise ParseError("--mu is required for the iga-laplacian problem")
        return iga_laplacian_problem(n - mu + 2, mu)
    raise ParseError(f"unknown problem {problem!r}")


def _run_solve(problem, symbol, label, n, mu, tol, cycles, pre, post, max_iter):
    instance = _build_problem(problem, n, mu)
    hierarchy = build_hierarchy(
        instance.operator,
        symbol,
        CutVariant.DIRICHLET,
        _coarsest_dim(symbol.arity),
        cycles=cycles,
    )
    report = mgm_solve(
        hierarchy,
        instance.rhs,
        pre=SmootherConfig(sweeps=pre),
        post=SmootherConfig(sweeps=post),
        tol=tol,
        max_iter=max_iter,
    )
    name = problem if mu is None else f"{problem}-mu{mu}"
    return {
        "problem": name,
        "symbol": label,
        "n": str(n),
        "g": str(symbol.arity),
        "iterations": str(report.iterations),
        "conv_rate": f"{report.conv_rate:.4f}",
        "converged": str(report.converged).lower(),
        "wall_time_s": f"{report.wall_time:.3f}",
    }


def _write_rows(rows, out_path):
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_HEADER, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    text = buffer.getvalue()
    if out_path:
        with open(out_path, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args):
    symbol, _ = _symbol_from_args(args)
    requested_ok = True
    print(f"arity: {symbol.arity}")
    if args.problem:
        f = _problem_symbol(args.problem)
        report = certify_vcycle(f, symbol)
        tgm_report = certify_tgm(f, symbol)
        if args.format == "keyvalue":
            print(report.to_keyvalues())
        else:
            print(report.to_text())
        requested_ok = tgm_report.tgm_ok and report.vcycle_ok
    else:
        gen = generation_degree(symbol)
        cohen = cohen_check(symbol)
        if args.format == "keyvalue":
            print(f"generation_degree={gen}")
            print(f"cohen_ok={str(cohen.ok).lower()}")
            print(f"cohen_min_modulus={cohen.min_modulus:.6e}")
        else:
            print(f"generation degree: {gen}")
            print(
                f"cohen: {'ok' if cohen.ok else 'FAIL'} "
                f"(min modulus {cohen.min_modulus:.3e} at x={cohen.minimizer:.4f})"
            )
        requested_ok = cohen.ok
    return 0 if requested_ok else 1


def cmd_solve(args):
    symbol, label = _symbol_from_args(args)
    if args.n is None:
        raise ParseError("--n is required for solve")
    row = _run_solve(
        args.problem,
        symbol,
        label,
        args.n,
        args.mu,
        args.tol,
        args.cycles,
        args.pre,
        args.post,
        args.max_iter,
    )
    _write_rows([row], args.out)
    return 0 if row["converged"] == "true" else 1


def _bench_jobs(table, small):
    if table in (1, 2):
        if table == 1:
            rows, family, exps, base = BINARY_ROWS, "binary", [10, 11, 12], 2
        else:
            rows, family, exps, base = TERNARY_ROWS, "ternary", [6, 7, 8], 3
        if small:
            exps = [e - 1 for e in exps]
        sizes = [base**e - 1 for e in exps]
        return [
            ("biharmonic", family, j, l, n, None)
            for (j, l) in rows
            for n in sizes
        ]
    if table in (3, 4):
        if table == 3:
            rows, family, n = BINARY_ROWS, "binary", 2**9 - 1
            if small:
                n = 2**8 - 1
        else:
            rows, family, n = TERNARY_ROWS, "ternary", 3**6 - 1
            if small:
                n = 3**5 - 1
        return [
            ("iga-laplacian", family, j, l, n, mu)
            for (j, l) in rows
            for mu in IGA_DEGREES
        ]
    raise ParseError(f"unknown benchmark table {table}")


def cmd_bench(args):
    jobs = _bench_jobs(args.table, args.small)

    def run(job):
        problem, family, j, l, n, mu = job
        if family == "binary":
            symbol, label = binary_pseudo_spline(j, l), f"p_{j}_{l}"
        else:
            symbol, label = ternary_pseudo_spline(j, l), f"tp_{j}_{l}"
        return _run_solve(
            problem, symbol, label, n, mu, args.tol, args.cycles, args.pre, args.post, args.max_iter
        )

    workers = max(1, int(os.environ.get("SUBDIVMG_THREADS", "1")))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, jobs))
    else:
        rows = [run(job) for job in jobs]
    _write_rows(rows, args.out)
    return 0 if all(r["converged"] == "true" for r in rows) else 1


def cmd_plot(args):
    xs = np.linspace(0.0, np.pi, PLOT_SAMPLES)
    curves = []
    for j, l in args.binary or []:
        curves.append((f"p_{j}_{l}", binary_pseudo_spline(j, l).eval(xs)))
    for j, l in args.ternary or []:
        curves.append((f"tp_{j}_{l}", ternary_pseudo_spline(j, l).eval(xs)))
    for mu in args.iga_mu or []:
        vals = iga_symbol(mu, xs)
        peak = np.max(np.abs(vals))
        curves.append((f"iga_mu{mu}", vals / peak if peak else vals))
    if not curves:
        raise ParseError("nothing to plot: give --binary, --ternary or --iga-mu")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["curve", "x", "value"])
    for label, vals in curves:
        for x, v in zip(xs, vals):
            writer.writerow([label, f"{x:.10f}", f"{v:.12e}"])
    text = buffer.getvalue()
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="subdiv-mg",
        description="Multigrid solvers with subdivision-symbol grid transfer operators",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_symbol_flags(p, repeatable=False):
        if repeatable:
            p.add_argument("--binary", nargs=2, type=int, action="append", metavar=("J", "L"))
            p.add_argument("--ternary", nargs=2, type=int, action="append", metavar=("J", "L"))
        else:
            p.add_argument("--binary", nargs=2, type=int, metavar=("J", "L"))
            p.add_argument("--ternary", nargs=2, type=int, metavar=("J", "L"))
            p.add_argument("--symbol-file", help="read the mask from a symbol text file")

    def add_cycle_flags(p):
        p.add_argument("--tol", type=float, default=1e-7)
        p.add_argument("--cycles", type=int, default=1, help="recursion count s (1 = V-cycle)")
        p.add_argument("--pre", type=int, default=1, help="pre-smoothing sweeps")
        p.add_argument("--post", type=int, default=1, help="post-smoothing sweeps")
        p.add_argument("--max-iter", type=int, default=2000)
        p.add_argument("--out", help="CSV output path (default stdout)")

    analyze = sub.add_parser("analyze", help="certify a transfer symbol")
    add_symbol_flags(analyze)
    analyze.add_argument("--problem", choices=["biharmonic", "iga-laplacian"])
    analyze.add_argument("--format", choices=["text", "keyvalue"], default="text")
    analyze.set_defaults(func=cmd_analyze)

    solve = sub.add_parser("solve", help="solve one problem instance")
    add_symbol_flags(solve)
    solve.add_argument("--problem", choices=["biharmonic", "iga-laplacian"], default="biharmonic")
    solve.add_argument("--n", type=int)
    solve.add_argument("--mu", type=int, help="spline degree for iga-laplacian")
    add_cycle_flags(solve)
    solve.set_defaults(func=cmd_solve)

    bench = sub.add_parser("bench", help="run a benchmark table")
    bench.add_argument("--table", type=int, choices=[1, 2, 3, 4], required=True)
    bench.add_argument("--small", action="store_true", help="one-size-down dimensions")
    add_cycle_flags(bench)
    bench.set_defaults(func=cmd_bench)

    plot = sub.add_parser("plot", help="sample symbols on [0, pi] as CSV")
    add_symbol_flags(plot, repeatable=True)
    plot.add_argument("--iga-mu", type=int, action="append", metavar="MU")
    plot.add_argument("--out", help="CSV output path (default stdout)")
    plot.set_defaults(func=cmd_plot)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SubdivMgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
