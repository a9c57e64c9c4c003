"""Tests for the bracket-and-select allocator."""

import numpy as np
import pytest

from seatalloc.core import enumerate_oracle
from seatalloc.generators import SplitMix64, derive_seed, gen_votes, parse_distribution
from seatalloc.methods import builtin_method_names, get_method
from seatalloc.sandwich import candidate_size_bound, compute_window, sandwich_select


def test_window_frozen_example():
    # sainte-lague, four equal parties, four seats: everything is computable
    # by hand.  Divisors 1,3,5,7,9; margin = (9-7)/2 = 1; cutoff = 7+1 = 8.
    method = get_method("sainte-lague")
    votes = (1.0, 1.0, 1.0, 1.0)
    window = compute_window(method, votes, 4)
    assert window.margin == pytest.approx(1.0)
    assert window.cutoff == pytest.approx(8.0)
    assert window.active.tolist() == [0, 1, 2, 3]
    assert window.active_votes == pytest.approx(4.0)
    # Rank bounds: lower = (2*4 - (2-1)*4)/4 = 1, upper = (2*4 + 1*4)/4 = 3.
    assert window.lower == pytest.approx(1.0)
    assert window.upper == pytest.approx(3.0)
    # Each party contributes its prices 1 and 3: eight candidates, none
    # discarded below the bracket, so the in-buffer rank equals the house size.
    assert window.candidate_count == 8
    assert window.target_rank == 4
    assert sorted(window.values.tolist()) == [1.0, 1.0, 1.0, 1.0, 3.0, 3.0, 3.0, 3.0]
    assert candidate_size_bound(method, window) == pytest.approx(8.0)

    alloc, filled = sandwich_select(method, votes, 4)
    assert filled.selected is not None
    assert filled.selected.value == pytest.approx(1.0)
    assert filled.comparisons > 0
    assert alloc.astar == pytest.approx(1.0)
    assert alloc.seats() == (1, 1, 1, 1)


def test_window_drops_parties_priced_out():
    # The tiny party's first seat costs 1.0, far above the cutoff around the
    # large party's third price, so it never enters the candidate algebra.
    method = get_method("greatest-divisors")
    window = compute_window(method, (100.0, 1.0), 3)
    assert window.active.tolist() == [0]
    alloc, _ = sandwich_select(method, (100.0, 1.0), 3)
    assert alloc.seats() == (3, 0)
    assert alloc.astar == pytest.approx(0.03)


def test_bracket_and_buffer_guarantees():
    methods = [get_method(name) for name in builtin_method_names()]
    master = 550901
    for t in range(80):
        stream = SplitMix64(derive_seed(master, t))
        method = methods[t % len(methods)]
        n = 1 + stream.next_below(20)
        k = 1 + stream.next_below(5 * n)
        votes = gen_votes(parse_distribution("uniform:0.5,20"), n,
                          stream.next_u64())
        window = compute_window(method, votes, k)
        assert window.lower <= window.upper
        assert 1 <= window.target_rank <= window.candidate_count
        assert window.candidate_count <= candidate_size_bound(method, window)
        alloc, filled = sandwich_select(method, votes, k)
        tol = 1e-9 * max(1.0, abs(alloc.astar))
        assert filled.lower - tol <= alloc.astar <= filled.upper + tol


def test_matches_oracle_with_both_selectors():
    methods = [get_method(name) for name in builtin_method_names()]
    dists = [parse_distribution(s) for s in
             ("uniform:1,10", "exponential:1", "poisson:2", "pareto:1.1,1")]
    master = 980423
    for t in range(60):
        stream = SplitMix64(derive_seed(master, t))
        method = methods[t % len(methods)]
        dist = dists[t % len(dists)]
        n = 1 + stream.next_below(12)
        k = 1 + stream.next_below(4 * n)
        votes = gen_votes(dist, n, stream.next_u64())
        oracle_astar, oracle = enumerate_oracle(method, votes, k)
        for selector in ("quick", "mom"):
            alloc, window = sandwich_select(method, votes, k, selector=selector,
                                            seed=stream.next_u64())
            assert alloc.astar == oracle_astar
            assert alloc.same_seats(oracle)
            assert window.selected.value == alloc.astar


def test_selected_candidate_is_a_real_price():
    method = get_method("equal-proportions")
    votes = (9.0, 5.0, 2.0)
    alloc, window = sandwich_select(method, votes, 6)
    cand = window.selected
    price = float(np.asarray(method.divisor(cand.index), dtype=float)) / votes[cand.party]
    assert price == alloc.astar


def test_unknown_selector_rejected():
    with pytest.raises(ValueError, match="backend"):
        sandwich_select(get_method("sainte-lague"), (1.0, 2.0), 3, selector="bogus")
