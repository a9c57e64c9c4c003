"""Seat-by-seat apportionment: award each seat to the cheapest next price.

The textbook allocator.  Correct for every divisor method and useful as a
baseline, but it touches every one of the ``k`` seats: the ``scan``
variant re-scans all ``n`` next prices per seat (``k*n`` comparisons), the
``heap`` variant keeps them in a binary heap (``n`` inserts plus ``k``
pop/push pairs).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .core import (Allocation, as_votes_array, astar_from_seats,
                   finalize_allocation, validate_house_size)
from .methods import DivisorMethod

VARIANTS = ("scan", "heap")


@dataclass(frozen=True)
class IterativeStats:
    """Work counters: ``comparisons`` for scan, ``heap_ops`` for heap."""

    variant: str
    comparisons: int = 0
    heap_ops: int = 0


def _award_by_scan(method: DivisorMethod, votes: np.ndarray, k: int):
    n = votes.size
    seats = np.zeros(n, dtype=np.int64)
    next_price = np.asarray(method.divisor(seats), dtype=float) / votes
    comparisons = 0
    for _ in range(k):
        i = int(np.argmin(next_price))  # ties resolved to the lowest index
        seats[i] += 1
        next_price[i] = float(method.divisor(int(seats[i]))) / votes[i]
        comparisons += n
    return seats, comparisons


def _award_by_heap(method: DivisorMethod, votes: np.ndarray, k: int):
    n = votes.size
    seats = np.zeros(n, dtype=np.int64)
    first = np.asarray(method.divisor(np.zeros(n, dtype=np.int64)), dtype=float) / votes
    heap = [(float(first[i]), i) for i in range(n)]
    heapq.heapify(heap)
    heap_ops = n
    for _ in range(k):
        _, i = heapq.heappop(heap)  # ties resolved to the lowest index
        seats[i] += 1
        heapq.heappush(heap, (float(method.divisor(int(seats[i]))) / votes[i], i))
        heap_ops += 2
    return seats, heap_ops


def iterative_apportion(method: DivisorMethod, votes, k: int,
                        variant: str = "scan",
                        rel_tol: float | None = None
                        ) -> tuple[Allocation, IterativeStats]:
    """Apportion ``k`` seats one at a time; ``variant`` is scan or heap."""
    v = as_votes_array(votes)
    k = validate_house_size(k)
    if variant == "scan":
        seats, comparisons = _award_by_scan(method, v, k)
        stats = IterativeStats(variant=variant, comparisons=comparisons)
    elif variant == "heap":
        seats, heap_ops = _award_by_heap(method, v, k)
        stats = IterativeStats(variant=variant, heap_ops=heap_ops)
    else:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    astar = astar_from_seats(method, v, seats)
    return finalize_allocation(method, v, k, astar, rel_tol), stats
