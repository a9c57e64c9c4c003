"""Command-line interface.

Subcommands: ``apportion`` (allocate seats for a votes file), ``bench``
(run the benchmark harness; optionally emit plot data and rendered
figures), ``generate`` (write random votes files) and ``verify`` (fuzz
cross-check of all allocators against the enumeration oracle).

Exit codes: 0 on success, 2 on invalid input or usage, 3 when results
fail internal verification.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .bench import (ALGORITHM_IDS, BenchConfig, EmptySelection,
                    MismatchDetected, PLOT_KINDS, emit_csv, emit_plot_data,
                    run_benchmark)
from .core import ApportionmentError, InconsistentRank, validate_house_size
from .crosscheck import CrosscheckConfig, run_crosscheck
from .bench import run_algorithm
from .core import verify_allocation
from .generators import (derive_seed, distribution_names, gen_votes,
                         parse_distribution)
from .methods import builtin_method_names, get_method
from .votesfile import read_votes, write_votes

_METHOD_HELP = ("divisor method: one of %s, or stationary:<r>, "
                "linear:<alpha>,<beta>, power-mean:<p>"
                % ", ".join(builtin_method_names()))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seatalloc",
        description="Proportional apportionment with divisor methods.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_app = sub.add_parser("apportion",
                           help="allocate seats for a votes file")
    p_app.add_argument("--method", required=True, help=_METHOD_HELP)
    p_app.add_argument("--seats", required=True, type=int,
                       help="house size (positive integer)")
    p_app.add_argument("--votes", required=True,
                       help="votes file: one positive decimal per line, "
                            "# comments ignored")
    p_app.add_argument("--algorithm", default="sandwich",
                       choices=ALGORITHM_IDS)
    p_app.add_argument("--select", default="quick", choices=("quick", "mom"),
                       help="selection backend used by the sandwich algorithm")
    p_app.add_argument("--seed", type=int, default=0,
                       help="seed for randomized selection pivots")
    p_app.add_argument("--tolerance", type=float, default=None,
                       help="relative comparison tolerance (default 1e-9, "
                            "or the SEATALLOC_TOLERANCE environment variable)")

    p_bench = sub.add_parser("bench", help="benchmark the allocators")
    p_bench.add_argument("--algorithms", default=",".join(ALGORITHM_IDS),
                         help="comma-separated algorithm ids "
                              f"(default: all of {', '.join(ALGORITHM_IDS)})")
    p_bench.add_argument("--method", default="sainte-lague", help=_METHOD_HELP)
    group = p_bench.add_mutually_exclusive_group(required=True)
    group.add_argument("--n-values", help="comma-separated party counts")
    group.add_argument("--n-geom",
                       help="geometric party-count grid lo:hi:points")
    p_bench.add_argument("--k-mult", type=int, default=5,
                         help="seats per party: k = mult * n (default 5)")
    p_bench.add_argument("--dist", default="uniform",
                         help="vote distribution: one of %s, with optional "
                              ":params" % ", ".join(distribution_names()))
    p_bench.add_argument("--instances-per-n", type=int, default=3)
    p_bench.add_argument("--reps", type=int, default=5,
                         help="timed executions per block (default 5)")
    p_bench.add_argument("--warmup", type=int, default=1,
                         help="untimed executions before timing (default 1)")
    p_bench.add_argument("--seed", type=int, default=1)
    p_bench.add_argument("--out", required=True, help="output CSV path")
    p_bench.add_argument("--no-time", action="store_true",
                         help="skip timing; zero mean_time_ns for "
                              "deterministic output")
    p_bench.add_argument("--plot-data",
                         help="directory for whitespace-separated plot data "
                              f"files ({', '.join(PLOT_KINDS)})")
    p_bench.add_argument("--figures",
                         help="directory for rendered matplotlib figures")
    p_bench.add_argument("--select", default="quick", choices=("quick", "mom"))
    p_bench.add_argument("--workers", type=int, default=1,
                         help="shard instances across this many processes")
    p_bench.add_argument("--tolerance", type=float, default=None)

    p_gen = sub.add_parser("generate", help="write a random votes file")
    p_gen.add_argument("--dist", default="uniform")
    p_gen.add_argument("--n", required=True, type=int, help="number of parties")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--k-mult", type=int, default=None,
                       help="record a suggested house size k = mult * n "
                            "in the header")
    p_gen.add_argument("--out", required=True)

    p_ver = sub.add_parser("verify",
                           help="fuzz cross-check allocators against the oracle")
    p_ver.add_argument("--instances", type=int, default=200)
    p_ver.add_argument("--max-n", type=int, default=50)
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--methods", default=",".join(builtin_method_names()))
    p_ver.add_argument("--dists", default=",".join(distribution_names()))
    p_ver.add_argument("--algorithms", default=",".join(ALGORITHM_IDS))
    p_ver.add_argument("--max-mult", type=int, default=10)
    p_ver.add_argument("--tolerance", type=float, default=None)

    return parser


def _cmd_apportion(args) -> int:
    method = get_method(args.method)
    votes = read_votes(args.votes)
    k = validate_house_size(args.seats)
    allocation, _, _ = run_algorithm(args.algorithm, method, votes, k,
                                     rel_tol=args.tolerance,
                                     select_backend=args.select,
                                     seed=args.seed)
    valid = verify_allocation(method, votes, k, allocation, args.tolerance)
    lines = [
        f"method: {method.name}",
        f"algorithm: {args.algorithm}",
        f"parties: {votes.size}",
        f"house-size: {k}",
        f"proportionality-constant: {allocation.astar!r}",
        f"residual-seats: {allocation.residual}",
        f"allocation-valid: {'yes' if valid else 'no'}",
        "party votes undisputed tied",
    ]
    for i, vote in enumerate(votes):
        lines.append(f"{i + 1} {vote:g} {allocation.undisputed[i]} "
                     f"{'yes' if allocation.tied[i] else 'no'}")
    print("\n".join(lines))
    if not valid:
        print("error: allocation failed the optimality check", file=sys.stderr)
        return 3
    return 0


def _parse_n_grid(args) -> tuple[int, ...]:
    if args.n_values:
        return tuple(int(part) for part in args.n_values.split(","))
    lo_s, hi_s, points_s = args.n_geom.split(":")
    lo, hi, points = int(lo_s), int(hi_s), int(points_s)
    if lo < 1 or hi < lo or points < 1:
        raise ValueError(f"bad geometric grid {args.n_geom!r}")
    if points == 1:
        return (lo,)
    ratio = (hi / lo) ** (1.0 / (points - 1))
    grid = []
    for i in range(points):
        value = round(lo * ratio ** i)
        if not grid or value > grid[-1]:
            grid.append(value)
    return tuple(grid)


def _cmd_bench(args) -> int:
    config = BenchConfig(
        algorithms=tuple(args.algorithms.split(",")),
        method=args.method,
        n_values=_parse_n_grid(args),
        k_multiplier=args.k_mult,
        dist=args.dist,
        instances_per_n=args.instances_per_n,
        reps_per_instance=args.reps,
        warmup_reps=args.warmup,
        seed=args.seed,
    )
    out_path = Path(args.out)
    if out_path.parent and not out_path.parent.exists():
        out_path.parent.mkdir(parents=True, exist_ok=True)
    records = run_benchmark(config, no_time=args.no_time,
                            rel_tol=args.tolerance,
                            select_backend=args.select,
                            workers=args.workers,
                            mismatch_dir=str(out_path.parent or "."))
    emit_csv(records, out_path)
    print(f"wrote {len(records)} records to {out_path}")
    if args.plot_data:
        data_dir = Path(args.plot_data)
        data_dir.mkdir(parents=True, exist_ok=True)
        for kind in PLOT_KINDS:
            try:
                target = data_dir / f"{kind}.dat"
                emit_plot_data(records, kind, target)
                print(f"wrote plot data {target}")
            except EmptySelection:
                print(f"skipping plot data for {kind}: no matching records")
    if args.figures:
        from .plotting import render_figures
        for path in render_figures(records, args.figures):
            print(f"wrote figure {path}")
    return 0


def _cmd_generate(args) -> int:
    dist = parse_distribution(args.dist)
    if args.n < 1:
        raise ValueError(f"need at least one party, got n={args.n}")
    votes = gen_votes(dist, args.n, args.seed)
    header = [
        "votes file written by seatalloc generate",
        f"dist: {dist.name}",
        f"n: {args.n}",
        f"seed: {args.seed}",
    ]
    if args.k_mult is not None:
        if args.k_mult < 1:
            raise ValueError("--k-mult must be >= 1")
        header.append(f"suggested-house-size: {args.k_mult * args.n}")
    write_votes(args.out, votes, header=header)
    print(f"wrote {args.n} votes to {args.out}")
    return 0


def _cmd_verify(args) -> int:
    config = CrosscheckConfig(
        instances=args.instances,
        max_n=args.max_n,
        seed=args.seed,
        methods=tuple(args.methods.split(",")),
        dists=tuple(args.dists.split(",")),
        algorithms=tuple(args.algorithms.split(",")),
        max_multiplier=args.max_mult,
    )
    report = run_crosscheck(config, rel_tol=args.tolerance)
    print("\n".join(report.summary_lines()))
    return 0 if report.ok else 3


_HANDLERS = {
    "apportion": _cmd_apportion,
    "bench": _cmd_bench,
    "generate": _cmd_generate,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (MismatchDetected, InconsistentRank) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ApportionmentError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
