"""Randomized cross-checking of every allocator against the oracle.

Draws instances across methods, distributions and sizes, apportions each
with the enumeration oracle and with every fast allocator, and demands
exact structural agreement plus tight numeric agreement on the seat price.
Window brackets and jump surpluses are audited on the way through.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bench import ALGORITHM_IDS, COUNTER_SURPLUS, run_algorithm
from .core import enumerate_oracle, verify_allocation
from .generators import SplitMix64, derive_seed, distribution_names, gen_votes, \
    parse_distribution
from .methods import builtin_method_names, get_method
from .robust import fuzzy_eq, fuzzy_le
from .sandwich import candidate_size_bound, compute_window

_MAX_REPORTED_FAILURES = 25


@dataclass
class CrosscheckConfig:
    instances: int = 200
    max_n: int = 50
    seed: int = 0
    methods: tuple[str, ...] = builtin_method_names()
    dists: tuple[str, ...] = distribution_names()
    algorithms: tuple[str, ...] = ALGORITHM_IDS
    max_multiplier: int = 10

    def __post_init__(self) -> None:
        if self.instances < 1 or self.max_n < 1 or self.max_multiplier < 1:
            raise ValueError("instances, max_n and max_multiplier must be >= 1")
        self.methods = tuple(self.methods)
        self.dists = tuple(self.dists)
        self.algorithms = tuple(self.algorithms)
        for spec in self.methods:
            get_method(spec)
        for spec in self.dists:
            parse_distribution(spec)


@dataclass
class CrosscheckReport:
    instances_run: int = 0
    allocation_mismatches: int = 0
    astar_mismatches: int = 0
    verify_failures: int = 0
    window_violations: int = 0
    surplus_violations: int = 0
    max_surplus_ratio: float = 0.0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.allocation_mismatches or self.astar_mismatches
                    or self.verify_failures or self.window_violations
                    or self.surplus_violations)

    def record_failure(self, message: str) -> None:
        if len(self.failures) < _MAX_REPORTED_FAILURES:
            self.failures.append(message)

    def summary_lines(self) -> list[str]:
        lines = [
            f"instances checked: {self.instances_run}",
            f"allocation mismatches: {self.allocation_mismatches}",
            f"seat-price mismatches: {self.astar_mismatches}",
            f"optimality-check failures: {self.verify_failures}",
            f"window-bracket violations: {self.window_violations}",
            f"jump-surplus violations: {self.surplus_violations}",
            f"largest |surplus|/n observed: {self.max_surplus_ratio:.4f}",
            "result: " + ("OK" if self.ok else "FAILED"),
        ]
        lines.extend(f"  failure: {msg}" for msg in self.failures)
        return lines


def run_crosscheck(config: CrosscheckConfig,
                   rel_tol: float | None = None) -> CrosscheckReport:
    report = CrosscheckReport()
    for t in range(config.instances):
        stream = SplitMix64(derive_seed(config.seed, t))
        method = get_method(config.methods[t % len(config.methods)])
        dist = parse_distribution(
            config.dists[(t // len(config.methods)) % len(config.dists)])
        n = 1 + stream.next_below(config.max_n)
        k = 1 + stream.next_below(config.max_multiplier * n)
        votes = gen_votes(dist, n, stream.next_u64())
        select_seed = stream.next_u64()
        tag = (f"method={method.name} dist={dist.name} n={n} k={k} "
               f"instance={t}")

        astar_ref, reference = enumerate_oracle(method, votes, k, rel_tol)

        window = compute_window(method, votes, k)
        bound = candidate_size_bound(method, window)
        if not (fuzzy_le(window.lower, astar_ref, rel_tol)
                and fuzzy_le(astar_ref, window.upper, rel_tol)
                and window.candidate_count <= bound + 1e-9):
            report.window_violations += 1
            report.record_failure(
                f"window [{window.lower!r}, {window.upper!r}] with "
                f"{window.candidate_count} candidates (bound {bound:.1f}) "
                f"does not bracket {astar_ref!r} for {tag}")

        for algorithm in config.algorithms:
            allocation, counter, counter_kind = run_algorithm(
                algorithm, method, votes, k, rel_tol=rel_tol, seed=select_seed)
            if not allocation.same_seats(reference):
                report.allocation_mismatches += 1
                report.record_failure(f"{algorithm} allocation differs from "
                                      f"oracle for {tag}")
            if not fuzzy_eq(allocation.astar, astar_ref, rel_tol):
                report.astar_mismatches += 1
                report.record_failure(
                    f"{algorithm} price {allocation.astar!r} != oracle "
                    f"{astar_ref!r} for {tag}")
            if not verify_allocation(method, votes, k, allocation, rel_tol):
                report.verify_failures += 1
                report.record_failure(f"{algorithm} output fails the "
                                      f"optimality check for {tag}")
            if counter_kind == COUNTER_SURPLUS:
                ratio = abs(counter) / n
                report.max_surplus_ratio = max(report.max_surplus_ratio, ratio)
                if abs(counter) > n:
                    report.surplus_violations += 1
                    report.record_failure(
                        f"{algorithm} surplus {counter} exceeds n for {tag}")
        report.instances_run += 1
    return report
