"""Benchmark harness comparing the allocators on generated instances.

Timing methodology: every algorithm sees the same instances; each
(algorithm, instance) pair is first run untimed (verification plus
warm-up), then timed as one block of repeated executions on a monotonic
nanosecond clock, reporting the block mean.  Verification — each result
checked for optimality and all results cross-compared — happens strictly
outside the timed region, and any disagreement aborts the run with a
reproduction file.

Per-record counters capture the work notion that matters per algorithm:
the signed seat surplus after the jump for jump-and-step, the candidate
buffer size for the selection-based allocator.
"""

from __future__ import annotations

import csv
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .core import Allocation, ApportionmentError, verify_allocation
from .generators import derive_seed, gen_votes, parse_distribution
from .iterative import iterative_apportion
from .jumpstep import jump_and_step
from .methods import get_method
from .robust import fuzzy_eq
from .sandwich import sandwich_select
from .votesfile import write_votes


class MismatchDetected(ApportionmentError):
    """Two allocators disagreed (or one failed verification) during a run."""


class EmptySelection(ApportionmentError):
    """A plot-data request matched no benchmark records."""


COUNTER_NONE = "none"
COUNTER_SURPLUS = "surplus"
COUNTER_CANDIDATES = "candidates"

ALGORITHM_IDS = ("iterative-scan", "iterative-heap",
                 "jump-step-scan", "jump-step-heap", "sandwich")


def run_algorithm(algorithm: str, method, votes, k,
                  rel_tol: float | None = None,
                  select_backend: str = "quick",
                  seed: int = 0) -> tuple[Allocation, int, str]:
    """Run one allocator; returns ``(allocation, counter, counter_kind)``."""
    if algorithm == "iterative-scan":
        allocation, _ = iterative_apportion(method, votes, k, "scan", rel_tol)
        return allocation, 0, COUNTER_NONE
    if algorithm == "iterative-heap":
        allocation, _ = iterative_apportion(method, votes, k, "heap", rel_tol)
        return allocation, 0, COUNTER_NONE
    if algorithm == "jump-step-scan":
        allocation, stats = jump_and_step(method, votes, k, "scan", rel_tol)
        return allocation, stats.surplus, COUNTER_SURPLUS
    if algorithm == "jump-step-heap":
        allocation, stats = jump_and_step(method, votes, k, "heap", rel_tol)
        return allocation, stats.surplus, COUNTER_SURPLUS
    if algorithm == "sandwich":
        allocation, window = sandwich_select(method, votes, k,
                                             selector=select_backend, seed=seed,
                                             rel_tol=rel_tol)
        return allocation, window.candidate_count, COUNTER_CANDIDATES
    raise ValueError(f"unknown algorithm {algorithm!r}; "
                     f"expected one of {ALGORITHM_IDS}")


@dataclass
class BenchConfig:
    """What to run: algorithms x n-grid x instances, one method and
    distribution per config."""

    algorithms: tuple[str, ...]
    method: str
    n_values: tuple[int, ...]
    k_multiplier: int
    dist: str
    instances_per_n: int = 3
    reps_per_instance: int = 5
    warmup_reps: int = 1
    seed: int = 1

    def __post_init__(self) -> None:
        self.algorithms = tuple(self.algorithms)
        self.n_values = tuple(int(n) for n in self.n_values)
        for algorithm in self.algorithms:
            if algorithm not in ALGORITHM_IDS:
                raise ValueError(f"unknown algorithm {algorithm!r}")
        if not self.algorithms or not self.n_values:
            raise ValueError("need at least one algorithm and one n value")
        if min(self.n_values) < 1:
            raise ValueError("n values must be positive")
        if self.k_multiplier < 1:
            raise ValueError("k multiplier must be >= 1")
        if self.instances_per_n < 1 or self.reps_per_instance < 1:
            raise ValueError("instances and reps must be >= 1")
        if self.warmup_reps < 0:
            raise ValueError("warmup reps must be >= 0")
        get_method(self.method)
        parse_distribution(self.dist)


@dataclass(frozen=True)
class BenchRecord:
    algorithm: str
    n: int
    k: int
    method: str
    dist: str
    seed: int
    instance: int
    rep_block: int
    mean_time_ns: float
    counter: int
    counter_kind: str


CSV_HEADER = ("algorithm", "n", "k", "method", "dist", "seed", "instance",
              "rep_block", "mean_time_ns", "counter", "counter_kind")


def _dump_mismatch(directory: Path, config: BenchConfig, n: int, instance: int,
                   votes, k: int, detail: str) -> Path:
    path = directory / f"mismatch-n{n}-i{instance}.votes"
    write_votes(path, votes, header=[
        "reproduction instance for a benchmark verification failure",
        f"method: {config.method}",
        f"dist: {config.dist}",
        f"house-size: {k}",
        f"seed: {config.seed}",
        f"detail: {detail}",
    ])
    return path


def _bench_cell(config: BenchConfig, n_index: int, instance: int,
                no_time: bool, rel_tol: float | None, select_backend: str,
                mismatch_dir: str) -> list[BenchRecord]:
    """Verification, warm-up and timing for one generated instance."""
    method = get_method(config.method)
    dist = parse_distribution(config.dist)
    n = config.n_values[n_index]
    k = config.k_multiplier * n
    cell = n_index * config.instances_per_n + instance
    votes = gen_votes(dist, n, derive_seed(config.seed, 2 * cell))
    select_seed = derive_seed(config.seed, 2 * cell + 1)

    def run(algorithm: str):
        return run_algorithm(algorithm, method, votes, k, rel_tol=rel_tol,
                             select_backend=select_backend, seed=select_seed)

    # Verification pass, doubling as the first warm-up execution.
    outputs = {algorithm: run(algorithm) for algorithm in config.algorithms}
    detail = None
    reference = outputs[config.algorithms[0]][0]
    for algorithm, (allocation, _, _) in outputs.items():
        if not verify_allocation(method, votes, k, allocation, rel_tol):
            detail = f"{algorithm} produced an invalid allocation"
            break
        if not (allocation.same_seats(reference)
                and fuzzy_eq(allocation.astar, reference.astar, rel_tol)):
            detail = (f"{algorithm} disagrees with "
                      f"{config.algorithms[0]} on this instance")
            break
    if detail is not None:
        path = _dump_mismatch(Path(mismatch_dir), config, n, instance,
                              votes, k, detail)
        raise MismatchDetected(f"{detail} (n={n}, k={k}); "
                               f"reproduction written to {path}")

    for _ in range(max(0, config.warmup_reps - 1)):
        for algorithm in config.algorithms:
            run(algorithm)

    records = []
    for algorithm in config.algorithms:
        if no_time:
            mean_ns = 0.0
        else:
            start = time.perf_counter_ns()
            for _ in range(config.reps_per_instance):
                run(algorithm)
            mean_ns = (time.perf_counter_ns() - start) / config.reps_per_instance
        _, counter, counter_kind = outputs[algorithm]
        records.append(BenchRecord(
            algorithm=algorithm, n=n, k=k, method=config.method,
            dist=config.dist, seed=config.seed, instance=instance,
            rep_block=0, mean_time_ns=mean_ns, counter=counter,
            counter_kind=counter_kind))
    return records


def run_benchmark(config: BenchConfig, *, no_time: bool = False,
                  rel_tol: float | None = None, select_backend: str = "quick",
                  workers: int = 1, mismatch_dir: str = ".") -> list[BenchRecord]:
    """Execute the whole configuration and return records in a fixed order.

    ``no_time`` skips the timed blocks and zeroes ``mean_time_ns``, making
    the output a pure function of the configuration (used by golden-file
    tests).  ``workers > 1`` shards instances across processes; each timed
    block still runs within a single process.
    """
    cells = [(n_index, instance)
             for n_index in range(len(config.n_values))
             for instance in range(config.instances_per_n)]
    args = [(config, n_index, instance, no_time, rel_tol, select_backend,
             mismatch_dir) for n_index, instance in cells]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_bench_cell_star, args))
    else:
        chunks = [_bench_cell(*a) for a in args]
    algorithm_order = {a: i for i, a in enumerate(config.algorithms)}
    n_order = {n: i for i, n in enumerate(config.n_values)}
    records = [record for chunk in chunks for record in chunk]
    records.sort(key=lambda r: (n_order[r.n], r.instance,
                                algorithm_order[r.algorithm], r.rep_block))
    return records


def _bench_cell_star(args):
    return _bench_cell(*args)


def emit_csv(records, path) -> None:
    """Write records with the fixed header; byte-deterministic for
    deterministic inputs."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in records:
            writer.writerow([r.algorithm, r.n, r.k, r.method, r.dist, r.seed,
                             r.instance, r.rep_block, repr(float(r.mean_time_ns)),
                             r.counter, r.counter_kind])


PLOT_KINDS = ("time_vs_n_normalized", "time_vs_counter", "counter_vs_n")


def _mean(values) -> float:
    values = list(values)
    return sum(values) / len(values)


def _ordered_unique(items):
    seen = {}
    for item in items:
        seen.setdefault(item, None)
    return list(seen)


def plot_series(records, kind: str) -> list[tuple[str, list[tuple[float, float]]]]:
    """Aggregate records into ``(label, [(x, y), ...])`` series per kind."""
    if kind == "time_vs_n_normalized":
        series = []
        for algorithm in _ordered_unique(r.algorithm for r in records):
            mine = [r for r in records if r.algorithm == algorithm]
            points = [(float(n), _mean(r.mean_time_ns / r.n
                                       for r in mine if r.n == n))
                      for n in sorted({r.n for r in mine})]
            series.append((algorithm, points))
        return series
    if kind == "time_vs_counter":
        counted = [r for r in records if r.counter_kind != COUNTER_NONE]
        series = []
        for key in _ordered_unique((r.algorithm, r.n) for r in counted):
            algorithm, n = key
            mine = [r for r in counted if (r.algorithm, r.n) == key]
            points = [(float(abs(r.counter)), r.mean_time_ns) for r in mine]
            series.append((f"{algorithm} n={n}", points))
        return series
    if kind == "counter_vs_n":
        counted = [r for r in records if r.counter_kind != COUNTER_NONE]
        series = []
        for algorithm in _ordered_unique(r.algorithm for r in counted):
            mine = [r for r in counted if r.algorithm == algorithm]
            points = [(float(n), _mean(abs(r.counter) / r.n
                                       for r in mine if r.n == n))
                      for n in sorted({r.n for r in mine})]
            series.append((algorithm, points))
        return series
    raise ValueError(f"unknown plot kind {kind!r}; expected one of {PLOT_KINDS}")


def emit_plot_data(records, kind: str, path) -> None:
    """Write whitespace-separated series files for external plotting."""
    series = plot_series(records, kind)
    if not series or all(not points for _, points in series):
        raise EmptySelection(f"no benchmark records to plot for kind {kind!r}")
    lines = [f"# plot data: {kind}", "# columns: x y"]
    for label, points in series:
        lines.append(f"# series: {label}")
        lines.extend(f"{x:g} {y:g}" for x, y in points)
        lines.append("")
    Path(path).write_text("\n".join(lines), encoding="utf-8")
