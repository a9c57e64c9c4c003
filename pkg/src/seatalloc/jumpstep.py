"""Jump-and-step apportionment: estimate the seat price, then correct.

Instead of awarding seats one by one, jump straight to a closed-form
estimate of the proportionality constant, hand every party the seats it
would buy at that price, and repair the (small) surplus or deficit with
iterative steps.  With the built-in estimator the correction count is at
most the number of parties, so the expected running time is linear.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .core import (Allocation, ApportionmentError, as_votes_array,
                   astar_from_seats, finalize_allocation, validate_house_size)
from .methods import DivisorMethod
from .robust import nudged_floor

VARIANTS = ("scan", "heap")


class EstimatorUnavailable(ApportionmentError):
    """The method exposes no usable linear bounds to estimate from."""


@dataclass(frozen=True)
class JumpStepStats:
    """``surplus``: signed seat excess after the jump (over-allocation is
    positive).  ``steps``: correction steps taken, always ``abs(surplus)``."""

    surplus: int
    steps: int


def estimate_a(method: DivisorMethod, votes, k: int) -> float:
    """Closed-form estimate of the k-th smallest seat price.

    Uses the method's linear sandwich ``alpha*x + beta`` (taking the exact
    intercept for straight-line methods, the midpoint of the sandwich
    otherwise).  Inverting the resulting linearised seat total around the
    half-seat rounding bias gives, with ``V`` the vote total and ``n`` the
    party count::

        a = (alpha / V) * (k + n * (beta/alpha - 1/2))   if 0 <= beta/alpha <= 1
        a = (alpha / V) * (k + n * floor(beta/alpha))    otherwise

    The second branch handles front-loaded sequences (intercept above the
    slope) whose first seats are disproportionately expensive.
    """
    v = as_votes_array(votes)
    k = validate_house_size(k)
    alpha, beta_lo, beta_hi = method.sandwich
    if not (alpha > 0 and math.isfinite(alpha)
            and math.isfinite(beta_lo) and math.isfinite(beta_hi)):
        raise EstimatorUnavailable(f"method {method} has no usable linear bounds")
    beta = method.intercept if method.is_exactly_linear else 0.5 * (beta_lo + beta_hi)
    total = float(v.sum())
    n = v.size
    ratio = beta / alpha
    if 0.0 <= ratio <= 1.0:
        return (alpha / total) * (k + n * (ratio - 0.5))
    return (alpha / total) * (k + n * math.floor(ratio))


def _remove_by_scan(method, votes, seats, excess):
    # Price actually paid for each party's last seat; unseated parties
    # cannot lose anything.
    last = np.where(seats >= 1,
                    np.asarray(method.divisor(seats - 1), dtype=float) / votes,
                    -np.inf)
    for _ in range(excess):
        i = int(np.argmax(last))  # most expensive last seat, lowest index wins ties
        seats[i] -= 1
        last[i] = (float(method.divisor(int(seats[i] - 1))) / votes[i]
                   if seats[i] >= 1 else -np.inf)


def _remove_by_heap(method, votes, seats, excess):
    seated = np.flatnonzero(seats >= 1)
    last = np.asarray(method.divisor(seats[seated] - 1), dtype=float) / votes[seated]
    heap = [(-float(last[idx]), int(i)) for idx, i in enumerate(seated)]
    heapq.heapify(heap)
    for _ in range(excess):
        _, i = heapq.heappop(heap)
        seats[i] -= 1
        if seats[i] >= 1:
            price = float(method.divisor(int(seats[i] - 1))) / votes[i]
            heapq.heappush(heap, (-price, i))


def _add_by_scan(method, votes, seats, deficit):
    nxt = np.asarray(method.divisor(seats), dtype=float) / votes
    for _ in range(deficit):
        i = int(np.argmin(nxt))
        seats[i] += 1
        nxt[i] = float(method.divisor(int(seats[i]))) / votes[i]


def _add_by_heap(method, votes, seats, deficit):
    nxt = np.asarray(method.divisor(seats), dtype=float) / votes
    heap = [(float(nxt[i]), i) for i in range(votes.size)]
    heapq.heapify(heap)
    for _ in range(deficit):
        _, i = heapq.heappop(heap)
        seats[i] += 1
        heapq.heappush(heap, (float(method.divisor(int(seats[i]))) / votes[i], i))


def _polish_exact(method, votes, seats):
    """Swap seats until no paid price exceeds an unpaid one, in exact floats.

    The jump starts from a rounded price estimate, so when two prices are
    bit-for-bit closer than the rounding noise the correction phase can
    stop one divisor index away from the true optimum on each side.  Each swap
    moves a seat from the most expensive holder to the cheapest bidder and
    strictly lowers the total price paid, so this terminates; generically
    it performs zero swaps.
    """
    while True:
        paid = np.where(seats >= 1,
                        np.asarray(method.divisor(seats - 1), dtype=float) / votes,
                        -np.inf)
        nxt = np.asarray(method.divisor(seats), dtype=float) / votes
        hi = int(np.argmax(paid))
        lo = int(np.argmin(nxt))
        if not paid[hi] > nxt[lo]:
            return
        seats[hi] -= 1
        seats[lo] += 1


def jump_and_step(method: DivisorMethod, votes, k: int,
                  variant: str = "scan",
                  rel_tol: float | None = None,
                  estimate_override: float | None = None
                  ) -> tuple[Allocation, JumpStepStats]:
    """Apportion ``k`` seats by estimate-then-correct.

    ``estimate_override`` substitutes any price for the built-in estimate;
    the result stays correct, only the number of correction steps changes.
    """
    v = as_votes_array(votes)
    k = validate_house_size(k)
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    if estimate_override is None:
        a = estimate_a(method, v, k)
    else:
        a = float(estimate_override)
        if not (math.isfinite(a) and a >= 0.0):
            raise ValueError(f"price estimate must be a non-negative real, got {a!r}")

    # Jump: every party takes all seats priced at or below the estimate.
    seats = (nudged_floor(method.delta_inv(v * a)) + 1.0).astype(np.int64)
    np.maximum(seats, 0, out=seats)
    surplus = int(seats.sum()) - k

    # Step: repair one seat at a time, in the cheapest-correction order.
    if surplus > 0:
        (_remove_by_scan if variant == "scan" else _remove_by_heap)(
            method, v, seats, surplus)
    elif surplus < 0:
        (_add_by_scan if variant == "scan" else _add_by_heap)(
            method, v, seats, -surplus)
    _polish_exact(method, v, seats)

    astar = astar_from_seats(method, v, seats)
    allocation = finalize_allocation(method, v, k, astar, rel_tol)
    return allocation, JumpStepStats(surplus=surplus, steps=abs(surplus))
