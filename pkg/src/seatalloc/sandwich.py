"""Selection-based apportionment in worst-case linear time.

The k-th smallest seat price lives in the multiset ``A = {d_j / v_i}``.
Rather than walking towards it seat by seat, bracket it:

1. Pick a cutoff price just above the largest party's k-th price.  Only
   parties whose first seat is cheaper than the cutoff (the *active* set)
   can influence the result.
2. The linear sandwich ``alpha*x + beta_lo <= delta(x) <= alpha*x + beta_hi``
   turns the rank function into two straight lines in the price, which
   invert to closed-form prices ``lower <= astar <= upper``.
3. Every active party contributes its prices inside ``[lower, upper]`` —
   at most ``2*(1 + (beta_hi-beta_lo)/alpha)`` each — to a candidate
   buffer, and the count of prices discarded below ``lower`` converts the
   house size into the target rank inside the buffer.
4. One order-statistic selection over the buffer yields the exact price.

Steps 1-3 are vectorised array passes and step 4 is linear-time selection,
so the whole allocator runs in time linear in the number of parties for a
fixed seats-per-party ratio.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (Allocation, Candidate, InconsistentRank, as_votes_array,
                   finalize_allocation, validate_house_size)
from .methods import DivisorMethod
from .robust import fuzzy_le, nudged_ceil, nudged_floor
from .selection import select


@dataclass
class CandidateWindow:
    """The price bracket and candidate buffer built by :func:`compute_window`.

    ``values[t]`` is the price of seat ``indices[t] + 1`` of party
    ``parties[t]``; the target price is the ``target_rank``-th smallest of
    ``values``.  ``selected`` and ``comparisons`` are filled in by
    :func:`sandwich_select`.
    """

    cutoff: float          # strict upper bound on the target price
    margin: float          # safety gap added above the largest party's k-th price
    active: np.ndarray     # indices of parties that can pay at most the cutoff
    active_votes: float    # vote total of the active parties
    lower: float           # closed-form lower bracket for the target price
    upper: float           # closed-form upper bracket for the target price
    values: np.ndarray
    parties: np.ndarray
    indices: np.ndarray
    target_rank: int
    selected: Candidate | None = field(default=None, compare=False)
    comparisons: int = field(default=0, compare=False)

    @property
    def active_count(self) -> int:
        return int(self.active.size)

    @property
    def candidate_count(self) -> int:
        return int(self.values.size)

    def candidates(self) -> list[Candidate]:
        return [Candidate(float(x), int(p), int(j))
                for x, p, j in zip(self.values, self.parties, self.indices)]


def candidate_size_bound(method: DivisorMethod, window: CandidateWindow) -> float:
    """Guaranteed cap on the buffer size: ``2*(1 + spread/alpha)`` per
    active party, where ``spread = beta_hi - beta_lo``."""
    alpha, beta_lo, beta_hi = method.sandwich
    return 2.0 * (1.0 + (beta_hi - beta_lo) / alpha) * window.active_count


def compute_window(method: DivisorMethod, votes, k: int,
                   nudge_scale: float = 1.0) -> CandidateWindow:
    """Bracket the k-th smallest price and materialise the candidates.

    ``nudge_scale`` widens the boundary rounding guards; the retry path in
    :func:`sandwich_select` passes a larger scale if the default rounding
    produced an inconsistent target rank.
    """
    v = as_votes_array(votes)
    k = validate_house_size(k)
    alpha, beta_lo, beta_hi = method.sandwich

    v_max = float(v.max())
    d_last = float(method.divisor(k - 1))
    margin = (float(method.divisor(k)) - d_last) / (2.0 * v_max)
    cutoff = d_last / v_max + margin

    # Parties whose first seat already costs at least the cutoff can win
    # nothing below the target price; drop them from all further algebra.
    active = np.flatnonzero(v > method.first_divisor / cutoff)
    va = v[active]
    active_votes = float(va.sum())
    m = int(active.size)

    lower = max(0.0, (alpha * k - (alpha - beta_lo) * m) / active_votes)
    upper = (alpha * k + beta_hi * m) / active_votes

    # Per active party: first seat index priced at or above `lower` and
    # last index priced at or below `upper`.  Rounding errs towards keeping
    # extra candidates.  No price with seat index >= k can be the k-th
    # smallest (its own party already offers k cheaper ones), hence the cap.
    j_lo = np.maximum(nudged_ceil(method.delta_inv(va * lower), nudge_scale),
                      0.0).astype(np.int64)
    j_hi = np.minimum(nudged_floor(method.delta_inv(va * upper), nudge_scale),
                      float(k - 1)).astype(np.int64)
    counts = np.maximum(j_hi - j_lo + 1, 0)

    total = int(counts.sum())
    rep_start = np.repeat(j_lo, counts)
    offsets = np.arange(total, dtype=np.int64) - np.repeat(
        np.cumsum(counts) - counts, counts)
    indices = rep_start + offsets
    parties = np.repeat(active, counts)
    values = np.asarray(method.divisor(indices), dtype=float) / np.repeat(va, counts)

    # Exactly j_lo prices per party were discarded below the bracket, so
    # the house size shifts down to the in-buffer rank of the target.
    target_rank = k - int(j_lo.sum())

    return CandidateWindow(cutoff=cutoff, margin=margin, active=active,
                           active_votes=active_votes, lower=lower, upper=upper,
                           values=values, parties=parties, indices=indices,
                           target_rank=target_rank)


def sandwich_select(method: DivisorMethod, votes, k: int,
                    selector: str = "quick", seed: int = 0,
                    rel_tol: float | None = None
                    ) -> tuple[Allocation, CandidateWindow]:
    """Apportion ``k`` seats via the candidate window and one selection.

    ``selector`` picks the order-statistic backend (``quick`` or ``mom``).
    """
    window = compute_window(method, votes, k)
    if not 1 <= window.target_rank <= window.candidate_count:
        # Boundary rounding was too aggressive; retry with a wider guard.
        window = compute_window(method, votes, k, nudge_scale=4.0)
        if not 1 <= window.target_rank <= window.candidate_count:
            raise InconsistentRank(
                f"target rank {window.target_rank} outside candidate buffer "
                f"of size {window.candidate_count} (n={len(votes)}, k={k})")
    rows = np.arange(window.candidate_count)
    result = select(window.values.copy(), window.target_rank,
                    payload=rows, backend=selector, seed=seed)
    row = int(result.payload)
    window.selected = Candidate(value=result.value,
                                party=int(window.parties[row]),
                                index=int(window.indices[row]))
    window.comparisons = result.comparisons
    astar = result.value
    if not (fuzzy_le(window.lower, astar, rel_tol)
            and fuzzy_le(astar, window.upper, rel_tol)):
        raise InconsistentRank(
            f"selected price {astar!r} escaped the bracket "
            f"[{window.lower!r}, {window.upper!r}]")
    allocation = finalize_allocation(method, votes, k, astar, rel_tol)
    return allocation, window
