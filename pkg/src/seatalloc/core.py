"""Core apportionment model: instances, allocations and ground truth.

The multiset of seat prices of an instance is ``A = {d_j / v_i}`` over all
parties ``i`` and seat indices ``j >= 0``.  Apportioning ``k`` seats means
buying the ``k`` cheapest prices; the *proportionality constant* ``astar``
is the k-th smallest element of ``A``.  Every allocator in this package
reduces its work to finding ``astar`` and then calls
:func:`finalize_allocation` to turn it into a canonical :class:`Allocation`.

:func:`enumerate_oracle` is the independent reference implementation: it
materialises the relevant prices, sorts them, and derives the allocation by
brute-force counting.  It exists so that the fast allocators can be checked
against something that shares none of their machinery.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .methods import DivisorMethod
from .robust import fuzzy_le, fuzzy_scale, resolve_tolerance

#: Refuse to materialise more than this many prices in the oracle.
ORACLE_CELL_LIMIT = 10_000_000


class ApportionmentError(Exception):
    """Base class for all domain errors raised by this package."""


class InstanceTooLarge(ApportionmentError):
    """The enumeration oracle would need too much memory for this instance."""


class InconsistentRank(ApportionmentError):
    """Numeric breakdown: a recovered price does not have the expected rank."""


def as_votes_array(votes: Sequence[float]) -> np.ndarray:
    """Validate and convert vote counts to a float array."""
    arr = np.asarray(votes, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("votes must be a non-empty one-dimensional sequence")
    if not np.all(np.isfinite(arr)) or not np.all(arr > 0.0):
        raise ValueError("every vote count must be a finite positive real")
    return arr


def validate_house_size(k) -> int:
    if int(k) != k or int(k) < 1:
        raise ValueError(f"house size must be a positive integer, got {k!r}")
    return int(k)


@dataclass
class Instance:
    """A problem instance: positive vote counts and a house size."""

    votes: np.ndarray
    house_size: int

    def __post_init__(self) -> None:
        self.votes = as_votes_array(self.votes)
        self.house_size = validate_house_size(self.house_size)

    @property
    def n(self) -> int:
        return int(self.votes.size)


@dataclass(frozen=True)
class Candidate:
    """A price ``value = d_index / votes[party]`` tagged with its origin."""

    value: float
    party: int
    index: int


@dataclass(frozen=True)
class Allocation:
    """Canonical result of apportioning ``k`` seats.

    ``undisputed[i]`` seats are certainly party ``i``'s.  The ``residual``
    seats go to parties flagged in ``tied``, at most one each; any such
    completion is a correct apportionment.  When the completion is forced
    (as many residual seats as tied parties) it is folded into
    ``undisputed`` and no flags remain, so ``residual == 0`` means the
    allocation is unique and ``residual >= 1`` means a genuine tie with
    ``residual < number of tied parties``.
    """

    undisputed: tuple[int, ...]
    tied: tuple[bool, ...]
    residual: int
    astar: float

    @property
    def n(self) -> int:
        return len(self.undisputed)

    @property
    def house_size(self) -> int:
        return sum(self.undisputed) + self.residual

    @property
    def is_unique(self) -> bool:
        return self.residual == 0

    def seats(self) -> tuple[int, ...]:
        """The seat vector, defined only for unique allocations."""
        if not self.is_unique:
            raise ValueError("allocation has unresolved ties; no single seat vector")
        return self.undisputed

    def same_seats(self, other: "Allocation") -> bool:
        """Structural equality ignoring the floating-point ``astar``."""
        return (self.undisputed == other.undisputed
                and self.tied == other.tied
                and self.residual == other.residual)


_COUNT_REPAIR_LIMIT = 64


def _prices_within(method: DivisorMethod, v: np.ndarray, bound: float,
                   strict: bool) -> np.ndarray:
    """Per-party count of prices below ``bound``: ``#{j : d_j / v_i < bound}``
    (or ``<=`` when ``strict`` is false), exact in float arithmetic.

    The inverse continuation gives the count in constant time per party,
    but its last few bits are unreliable exactly when a price sits on the
    bound.  The repair passes re-test the boundary divisors with the very
    same division and comparison a brute-force count would use, so the
    result agrees bit-for-bit with explicit enumeration.
    """
    counts = np.floor(method.delta_inv(v * bound)).astype(np.int64) + 1
    np.maximum(counts, 0, out=counts)

    def overshoot() -> np.ndarray:
        flags = np.zeros(v.shape, dtype=bool)
        seated = counts > 0
        if np.any(seated):
            last = np.asarray(method.divisor(counts[seated] - 1),
                              dtype=float) / v[seated]
            flags[seated] = (last >= bound) if strict else (last > bound)
        return flags

    for _ in range(_COUNT_REPAIR_LIMIT):
        flags = overshoot()
        if not flags.any():
            break
        counts[flags] -= 1
    else:
        raise InconsistentRank(f"price count will not settle below {bound!r}")

    for _ in range(_COUNT_REPAIR_LIMIT):
        nxt = np.asarray(method.divisor(counts), dtype=float) / v
        flags = (nxt < bound) if strict else (nxt <= bound)
        if not flags.any():
            break
        counts[flags] += 1
    else:
        raise InconsistentRank(f"price count will not settle above {bound!r}")
    return counts


def rank(method: DivisorMethod, votes, x: float) -> int:
    """Number of prices ``d_j / v_i <= x``, i.e. the rank of ``x`` in ``A``.

    Computed in constant time per party via the inverse continuation:
    party ``i`` contributes ``floor(delta_inv(v_i * x)) + 1`` prices (zero
    when even the first divisor is too expensive).
    """
    v = as_votes_array(votes)
    return int(_prices_within(method, v, float(x), strict=False).sum())


def astar_from_seats(method: DivisorMethod, votes, seats) -> float:
    """Recover the proportionality constant from a full seat vector.

    It is the most expensive price actually paid:
    ``max over seated parties of d_{s_i - 1} / v_i``.
    """
    v = as_votes_array(votes)
    s = np.asarray(seats, dtype=np.int64)
    if s.shape != v.shape or np.any(s < 0):
        raise ValueError("seats must be non-negative integers, one per party")
    seated = s >= 1
    if not np.any(seated):
        raise ValueError("at least one seat must be assigned")
    prices = np.asarray(method.divisor(s[seated] - 1), dtype=float) / v[seated]
    return float(prices.max())


def finalize_allocation(method: DivisorMethod, votes, k: int, astar: float,
                        rel_tol: float | None = None) -> Allocation:
    """Build the canonical :class:`Allocation` from the k-th smallest price.

    Seats strictly cheaper than ``astar`` (beyond the comparison tolerance)
    are undisputed; parties whose next price fuzzily equals ``astar``
    compete for the remaining seats.  Forced completions are folded so that
    tie flags survive only for genuine ties.
    """
    v = as_votes_array(votes)
    k = validate_house_size(k)
    tol = resolve_tolerance(rel_tol) * float(fuzzy_scale(astar, astar))
    undisputed = _prices_within(method, v, astar - tol, strict=True)
    boundary = np.asarray(method.divisor(undisputed), dtype=float) / v
    tied = np.abs(boundary - astar) <= tol
    residual = k - int(undisputed.sum())
    tied_count = int(np.count_nonzero(tied))
    if residual < 0 or residual > tied_count:
        raise InconsistentRank(
            f"price {astar!r} leaves {residual} residual seats for "
            f"{tied_count} tied parties (n={v.size}, k={k})")
    if residual == tied_count:
        # Forced completion: every tied party certainly receives its seat.
        undisputed = undisputed + tied.astype(np.int64)
        tied = np.zeros_like(tied)
        residual = 0
    return Allocation(undisputed=tuple(int(u) for u in undisputed),
                      tied=tuple(bool(t) for t in tied),
                      residual=residual,
                      astar=float(astar))


def verify_allocation(method: DivisorMethod, votes, k: int,
                      allocation: Allocation,
                      rel_tol: float | None = None) -> bool:
    """Check an allocation against the max-min optimality criterion.

    A completed seat vector ``s`` is optimal iff the most expensive price
    paid does not exceed the cheapest price skipped:
    ``max_i d_{s_i - 1}/v_i <= min_i d_{s_i}/v_i`` (fuzzily).  An
    allocation is valid iff every completion of its residual seats among
    its tied parties is optimal, which only the extreme completions need
    to witness.
    """
    v = as_votes_array(votes)
    k = validate_house_size(k)
    n = v.size
    if allocation.n != n:
        return False
    u = np.asarray(allocation.undisputed, dtype=np.int64)
    tied = np.asarray(allocation.tied, dtype=bool)
    r = allocation.residual
    if np.any(u < 0) or int(u.sum()) + r != k:
        return False
    tied_count = int(np.count_nonzero(tied))
    if r < 0 or r > tied_count:
        return False
    if r == 0 and tied_count > 0:
        return False

    inf = float("inf")
    # Most expensive price already paid (no party pays for seat 0 twice).
    paid = np.asarray(method.divisor(u - 1), dtype=float) / v
    paid_max = float(paid[u >= 1].max()) if np.any(u >= 1) else -inf
    next_price = np.asarray(method.divisor(u), dtype=float) / v

    if r == 0:
        return bool(fuzzy_le(paid_max, float(next_price.min()), rel_tol))

    boundary = next_price[tied]
    after = np.asarray(method.divisor(u[tied] + 1), dtype=float) / v[tied]
    others_min = float(next_price[~tied].min()) if tied_count < n else inf
    b_lo, b_hi = float(boundary.min()), float(boundary.max())

    if r == tied_count:
        # Single possible completion: all tied parties take their seat.
        lhs = max(paid_max, b_hi)
        rhs = min(others_min, float(after.min()))
        return bool(fuzzy_le(lhs, rhs, rel_tol))

    # Genuine tie: every size-r subset of the tied parties must complete
    # optimally.  Because any tied party can be chosen or skipped, all
    # boundary prices must agree (within twice the tolerance: each may sit
    # a tolerance away from the common tie price on either side), no paid
    # price may exceed them, and they must not exceed any skipped price.
    tol = resolve_tolerance(rel_tol)
    if b_hi - b_lo > 2.0 * tol * float(fuzzy_scale(b_hi, b_lo)):
        return False
    return bool(fuzzy_le(paid_max, b_lo, rel_tol)
                and fuzzy_le(b_hi, others_min, rel_tol)
                and fuzzy_le(b_hi, float(after.min()), rel_tol))


def enumerate_oracle(method: DivisorMethod, votes, k: int,
                     rel_tol: float | None = None) -> tuple[float, Allocation]:
    """Reference apportionment by explicit enumeration of prices.

    Materialises the first ``k`` prices of every party (any price beyond a
    party's k-th cannot be among the ``k`` cheapest overall), takes the
    k-th smallest, and rebuilds the allocation by counting — no inverse
    continuation, no incremental algorithm.  Guarded to ``n*k`` cells.
    """
    v = as_votes_array(votes)
    k = validate_house_size(k)
    n = v.size
    if n * k > ORACLE_CELL_LIMIT:
        raise InstanceTooLarge(
            f"oracle would materialise {n * k} prices (limit {ORACLE_CELL_LIMIT})")
    d = np.asarray(method.divisor(np.arange(k)), dtype=float)
    prices = d[np.newaxis, :] / v[:, np.newaxis]
    flat = prices.ravel()
    astar = float(np.partition(flat, k - 1)[k - 1])

    tol = resolve_tolerance(rel_tol) * float(fuzzy_scale(astar, astar))
    undisputed = (prices < astar - tol).sum(axis=1).astype(np.int64)
    tied = np.abs(prices - astar).min(axis=1) <= tol
    residual = k - int(undisputed.sum())
    tied_count = int(np.count_nonzero(tied))
    if residual < 0 or residual > tied_count:
        raise InconsistentRank(
            f"enumerated price {astar!r} leaves {residual} residual seats "
            f"for {tied_count} tied parties (n={n}, k={k})")
    if residual == tied_count:
        undisputed = undisputed + tied.astype(np.int64)
        tied = np.zeros_like(tied)
        residual = 0
    allocation = Allocation(undisputed=tuple(int(u) for u in undisputed),
                            tied=tuple(bool(t) for t in tied),
                            residual=residual,
                            astar=astar)
    return astar, allocation
