"""Core model: oracle, finalization, rank, verification, worked examples."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seatalloc.core import (Allocation, InconsistentRank, InstanceTooLarge,
                            Instance, as_votes_array, astar_from_seats,
                            enumerate_oracle, finalize_allocation, rank,
                            validate_house_size, verify_allocation)
from seatalloc.methods import builtin_method_names, get_method

QUARTET = (340.0, 280.0, 160.0, 60.0)


def brute_force_rank(method, votes, x):
    """Reference rank: count prices d_j / v_i <= x by explicit enumeration."""
    v = np.asarray(votes, dtype=float)
    if x < 0:
        return 0
    j_max = 4
    while float(method.divisor(j_max)) <= float(v.max()) * x:
        j_max *= 2
        assert j_max < 10**7, "test instance too large for brute force"
    d = np.asarray(method.divisor(np.arange(j_max + 1)), dtype=float)
    return int((d[np.newaxis, :] <= (v * x)[:, np.newaxis]).sum())


# -- frozen worked examples -------------------------------------------------


def test_greatest_divisors_quartet():
    method = get_method("greatest-divisors")
    astar, alloc = enumerate_oracle(method, QUARTET, 7)
    assert astar == pytest.approx(3 / 280, rel=1e-12)
    assert alloc.undisputed == (3, 3, 1, 0)
    assert alloc.tied == (False, False, False, False)
    assert alloc.residual == 0
    assert alloc.seats() == (3, 3, 1, 0)
    assert verify_allocation(method, QUARTET, 7, alloc)


def test_sainte_lague_quartet_folds_forced_tie():
    method = get_method("sainte-lague")
    astar, alloc = enumerate_oracle(method, QUARTET, 7)
    assert astar == pytest.approx(1 / 60, rel=1e-12)
    assert alloc.undisputed == (3, 2, 1, 1)
    assert alloc.residual == 0
    assert not any(alloc.tied)
    assert verify_allocation(method, QUARTET, 7, alloc)


def test_equal_votes_forced_completions_fold():
    method = get_method("sainte-lague")
    _, alloc = enumerate_oracle(method, (1.0, 1.0, 1.0, 1.0), 8)
    assert alloc.undisputed == (2, 2, 2, 2)
    assert alloc.residual == 0
    _, alloc = enumerate_oracle(method, (1.0, 1.0, 1.0, 1.0), 4)
    assert alloc.undisputed == (1, 1, 1, 1)
    assert alloc.residual == 0


def test_genuine_tie_is_reported():
    method = get_method("greatest-divisors")
    astar, alloc = enumerate_oracle(method, (2.0, 1.0, 1.0), 2)
    assert astar == pytest.approx(1.0)
    assert alloc.undisputed == (1, 0, 0)
    assert alloc.tied == (True, True, True)
    assert alloc.residual == 1
    assert not alloc.is_unique
    assert alloc.house_size == 2
    with pytest.raises(ValueError):
        alloc.seats()
    assert verify_allocation(method, (2.0, 1.0, 1.0), 2, alloc)


def test_zero_price_methods_allow_zero_astar():
    # First divisor 0 means k <= n instances resolve at price zero with
    # every party tied for the seats.
    method = get_method("smallest-divisors")
    astar, alloc = enumerate_oracle(method, (1.0, 0.05), 1)
    assert astar == 0.0
    assert alloc.undisputed == (0, 0)
    assert alloc.tied == (True, True)
    assert alloc.residual == 1
    recomputed = finalize_allocation(method, (1.0, 0.05), 1, astar)
    assert recomputed.same_seats(alloc)


def test_astar_from_seats_examples():
    gd = get_method("greatest-divisors")
    assert astar_from_seats(gd, QUARTET, (3, 3, 1, 0)) == pytest.approx(3 / 280)
    sl = get_method("sainte-lague")
    assert astar_from_seats(sl, QUARTET, (3, 2, 1, 1)) == pytest.approx(1 / 60)
    with pytest.raises(ValueError):
        astar_from_seats(gd, QUARTET, (0, 0, 0, 0))
    with pytest.raises(ValueError):
        astar_from_seats(gd, QUARTET, (1, 1, -1, 0))


def test_rank_examples():
    sl = get_method("sainte-lague")
    assert rank(sl, QUARTET, 0.01) == 4
    gd = get_method("greatest-divisors")
    assert rank(gd, (1.0, 1.0), 3.0) == 6
    assert rank(gd, (1.0, 1.0), 0.5) == 0
    assert rank(gd, (1.0, 1.0), -1.0) == 0


def test_finalize_matches_oracle_on_examples():
    for name in ("greatest-divisors", "sainte-lague", "equal-proportions"):
        method = get_method(name)
        astar, alloc = enumerate_oracle(method, QUARTET, 7)
        rebuilt = finalize_allocation(method, QUARTET, 7, astar)
        assert rebuilt.same_seats(alloc)
        assert rebuilt.astar == astar


def test_verify_rejects_wrong_method_and_perturbations():
    sl = get_method("sainte-lague")
    gd = get_method("greatest-divisors")
    alloc = Allocation(undisputed=(3, 2, 1, 1), tied=(False,) * 4,
                       residual=0, astar=1 / 60)
    assert verify_allocation(sl, QUARTET, 7, alloc)
    assert not verify_allocation(gd, QUARTET, 7, alloc)
    moved = Allocation(undisputed=(4, 2, 1, 0), tied=(False,) * 4,
                       residual=0, astar=1 / 60)
    assert not verify_allocation(sl, QUARTET, 7, moved)
    bad_total = Allocation(undisputed=(3, 2, 1, 0), tied=(False,) * 4,
                           residual=0, astar=1 / 60)
    assert not verify_allocation(sl, QUARTET, 7, bad_total)
    wrong_n = Allocation(undisputed=(4, 2, 1), tied=(False,) * 3,
                         residual=0, astar=1 / 60)
    assert not verify_allocation(sl, QUARTET, 7, wrong_n)
    stray_flag = Allocation(undisputed=(3, 2, 1, 1),
                            tied=(False, False, False, True),
                            residual=0, astar=1 / 60)
    assert not verify_allocation(sl, QUARTET, 7, stray_flag)


def test_finalize_raises_on_inconsistent_price():
    gd = get_method("greatest-divisors")
    with pytest.raises(InconsistentRank):
        finalize_allocation(gd, (1.0, 1.0), 4, 0.5)  # too cheap for 4 seats
    with pytest.raises(InconsistentRank):
        finalize_allocation(gd, (1.0, 1.0), 1, 100.0)  # buys far too many


def test_oracle_guards_instance_size():
    gd = get_method("greatest-divisors")
    with pytest.raises(InstanceTooLarge):
        enumerate_oracle(gd, (1.0, 1.0), 5_000_001)


def test_input_validation():
    with pytest.raises(ValueError):
        as_votes_array([])
    with pytest.raises(ValueError):
        as_votes_array([[1.0, 2.0]])
    with pytest.raises(ValueError):
        as_votes_array([1.0, 0.0])
    with pytest.raises(ValueError):
        as_votes_array([1.0, -3.0])
    with pytest.raises(ValueError):
        as_votes_array([1.0, float("nan")])
    with pytest.raises(ValueError):
        validate_house_size(0)
    with pytest.raises(ValueError):
        validate_house_size(2.5)
    assert validate_house_size(3.0) == 3
    inst = Instance(votes=[2.0, 1.0], house_size=4)
    assert inst.n == 2 and inst.house_size == 4


def test_allocation_structural_helpers():
    a = Allocation(undisputed=(1, 2), tied=(False, False), residual=0, astar=1.0)
    b = Allocation(undisputed=(1, 2), tied=(False, False), residual=0, astar=2.0)
    assert a.same_seats(b)
    assert a.n == 2 and a.house_size == 3 and a.is_unique


# -- property tests ----------------------------------------------------------

votes_lists = st.lists(
    st.floats(min_value=0.01, max_value=500.0, allow_nan=False,
              allow_infinity=False),
    min_size=1, max_size=8)


@settings(max_examples=120, deadline=None)
@given(votes=votes_lists, x=st.floats(min_value=-1.0, max_value=40.0),
       name=st.sampled_from(builtin_method_names()))
def test_rank_matches_brute_force(votes, x, name):
    method = get_method(name)
    assert rank(method, votes, x) == brute_force_rank(method, votes, x)


@settings(max_examples=120, deadline=None)
@given(votes=votes_lists, k_mult=st.integers(min_value=1, max_value=30),
       name=st.sampled_from(builtin_method_names()))
def test_oracle_self_consistency_and_finalize(votes, k_mult, name):
    method = get_method(name)
    k = min(k_mult, 10 * len(votes))
    astar, alloc = enumerate_oracle(method, votes, k)
    assert sum(alloc.undisputed) + alloc.residual == k
    tied_count = sum(alloc.tied)
    if alloc.residual == 0:
        assert tied_count == 0
    else:
        assert 1 <= alloc.residual < tied_count
    assert verify_allocation(method, votes, k, alloc)
    rebuilt = finalize_allocation(method, votes, k, astar)
    assert rebuilt.same_seats(alloc)
    # rank at the k-th smallest price covers at least k prices
    assert rank(method, votes, astar) >= k
