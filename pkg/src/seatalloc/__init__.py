"""Proportional apportionment with divisor methods.

The package provides three allocators for highest-averages seat
apportionment — a classic seat-by-seat iteration, a jump-and-step
scheme that starts from an estimated seat price, and a sandwich scheme
that reduces the problem to rank selection over a small candidate
window — together with an enumeration oracle, reproducible random
instance generators, and a benchmarking CLI.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .bench import (ALGORITHM_IDS, BenchConfig, BenchRecord, MismatchDetected,
                    emit_csv, emit_plot_data, plot_series, run_algorithm,
                    run_benchmark)
from .core import (Allocation, ApportionmentError, Candidate, InconsistentRank,
                   Instance, InstanceTooLarge, astar_from_seats,
                   enumerate_oracle, finalize_allocation, rank,
                   verify_allocation)
from .crosscheck import CrosscheckConfig, CrosscheckReport, run_crosscheck
from .generators import (SplitMix64, VoteDistribution, derive_seed,
                         distribution_names, gen_instance, gen_votes,
                         parse_distribution)
from .iterative import IterativeStats, iterative_apportion
from .jumpstep import (EstimatorUnavailable, JumpStepStats, estimate_a,
                       jump_and_step)
from .methods import (DivisorMethod, builtin_method_names, builtin_methods,
                      get_method, linear_method, modified_sainte_lague_method,
                      power_mean_method, stationary_method)
from .robust import DEFAULT_REL_TOL, default_tolerance, fuzzy_eq, fuzzy_le
from .sandwich import (CandidateWindow, candidate_size_bound, compute_window,
                       sandwich_select)
from .selection import (RankOutOfRange, SelectionResult, mom_select,
                        quickselect, select)
from .votesfile import read_votes, write_votes

__all__ = [
    "ALGORITHM_IDS",
    "Allocation",
    "ApportionmentError",
    "BenchConfig",
    "BenchRecord",
    "Candidate",
    "CandidateWindow",
    "CrosscheckConfig",
    "CrosscheckReport",
    "DEFAULT_REL_TOL",
    "DivisorMethod",
    "EstimatorUnavailable",
    "InconsistentRank",
    "Instance",
    "InstanceTooLarge",
    "IterativeStats",
    "JumpStepStats",
    "MismatchDetected",
    "RankOutOfRange",
    "SelectionResult",
    "SplitMix64",
    "VoteDistribution",
    "__version__",
    "astar_from_seats",
    "builtin_method_names",
    "builtin_methods",
    "candidate_size_bound",
    "compute_window",
    "default_tolerance",
    "derive_seed",
    "distribution_names",
    "emit_csv",
    "emit_plot_data",
    "enumerate_oracle",
    "estimate_a",
    "finalize_allocation",
    "fuzzy_eq",
    "fuzzy_le",
    "gen_instance",
    "gen_votes",
    "get_method",
    "iterative_apportion",
    "jump_and_step",
    "linear_method",
    "modified_sainte_lague_method",
    "mom_select",
    "parse_distribution",
    "plot_series",
    "power_mean_method",
    "quickselect",
    "rank",
    "read_votes",
    "run_algorithm",
    "run_benchmark",
    "run_crosscheck",
    "sandwich_select",
    "select",
    "stationary_method",
    "verify_allocation",
    "write_votes",
]
