"""Tests for the estimate-then-correct allocator."""

import math

import pytest

from seatalloc.core import enumerate_oracle
from seatalloc.generators import SplitMix64, derive_seed, gen_votes, parse_distribution
from seatalloc.jumpstep import EstimatorUnavailable, estimate_a, jump_and_step
from seatalloc.methods import DivisorMethod, builtin_method_names, get_method


def test_estimator_frozen_examples():
    votes = (4.0, 3.0, 3.0)  # V = 10
    # Exactly linear with beta/alpha = 0.5: a = alpha * k / V.
    assert estimate_a(get_method("linear:2,1"), votes, 5) == pytest.approx(1.0)
    # Front-loaded (beta/alpha = 2): a = (alpha/V) * (k + 2n).
    assert estimate_a(get_method("linear:1,2"), votes, 5) == pytest.approx(1.1)
    # stationary:0.5 has beta/alpha = 0.5 exactly: a = k / V.
    assert estimate_a(get_method("stationary:0.5"), (1.0, 2.0, 3.0, 4.0), 7) == \
        pytest.approx(0.7)
    assert estimate_a(get_method("sainte-lague"), (1.0, 1.0, 1.0, 1.0), 4) == \
        pytest.approx(2.0)
    # Non-linear continuation uses the sandwich midpoint (here 0.25).
    assert estimate_a(get_method("equal-proportions"), (1.0, 1.0, 1.0, 1.0), 4) == \
        pytest.approx(0.75)


def test_perfect_estimate_needs_no_steps():
    method = get_method("greatest-divisors")
    alloc, stats = jump_and_step(method, (1.0, 1.0, 1.0, 1.0), 4)
    assert alloc.seats() == (1, 1, 1, 1)
    assert stats.surplus == 0
    assert stats.steps == 0


def test_negative_estimate_falls_back_to_pure_stepping():
    # smallest-divisors with k < n/2 estimates a negative price; the jump
    # then seats nobody and the correction adds all k seats.
    method = get_method("smallest-divisors")
    votes = (1.0,) * 8
    assert estimate_a(method, votes, 3) == pytest.approx(-0.125)
    alloc, stats = jump_and_step(method, votes, 3)
    assert stats.surplus == -3
    assert stats.steps == 3
    _, oracle = enumerate_oracle(method, votes, 3)
    assert alloc.same_seats(oracle)


def test_override_changes_work_not_result():
    method = get_method("sainte-lague")
    votes = (340.0, 280.0, 160.0, 60.0)
    k = 7
    _, reference = enumerate_oracle(method, votes, k)
    for override in (1e-6, 0.001, 0.01, 0.02, 1.0, 50.0):
        for variant in ("scan", "heap"):
            alloc, stats = jump_and_step(method, votes, k, variant=variant,
                                         estimate_override=override)
            assert alloc.same_seats(reference)
            assert stats.steps == abs(stats.surplus)


def test_override_must_be_nonnegative_and_finite():
    method = get_method("sainte-lague")
    for bad in (-1.0, math.nan, math.inf):
        with pytest.raises(ValueError, match="estimate"):
            jump_and_step(method, (1.0, 2.0), 3, estimate_override=bad)


def test_unknown_variant_rejected():
    with pytest.raises(ValueError, match="variant"):
        jump_and_step(get_method("sainte-lague"), (1.0, 2.0), 3, variant="bogus")


def test_estimator_unavailable_without_linear_bounds():
    flat = DivisorMethod(name="flat", kind="linear", alpha=0.0,
                         beta_lo=1.0, beta_hi=1.0, intercept=1.0)
    with pytest.raises(EstimatorUnavailable):
        estimate_a(flat, (1.0, 2.0), 3)
    with pytest.raises(EstimatorUnavailable):
        jump_and_step(flat, (1.0, 2.0), 3)
    unbounded = DivisorMethod(name="unbounded", kind="linear", alpha=2.0,
                              beta_lo=-math.inf, beta_hi=1.0, intercept=1.0)
    with pytest.raises(EstimatorUnavailable):
        estimate_a(unbounded, (1.0, 2.0), 3)


def test_variants_match_each_other_and_oracle():
    methods = [get_method(name) for name in builtin_method_names()]
    dists = [parse_distribution(s) for s in
             ("uniform:1,10", "exponential:1", "poisson:2", "pareto:1.1,1")]
    master = 77031
    for t in range(60):
        stream = SplitMix64(derive_seed(master, t))
        method = methods[t % len(methods)]
        dist = dists[t % len(dists)]
        n = 1 + stream.next_below(12)
        k = 1 + stream.next_below(4 * n)
        votes = gen_votes(dist, n, stream.next_u64())
        oracle_astar, oracle = enumerate_oracle(method, votes, k)
        for variant in ("scan", "heap"):
            alloc, stats = jump_and_step(method, votes, k, variant=variant)
            assert alloc.astar == oracle_astar
            assert alloc.same_seats(oracle)
            assert stats.steps == abs(stats.surplus)
