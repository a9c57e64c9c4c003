"""Order-statistic selection over buffers of prices.

Two interchangeable backends return the r-th smallest value (1-based) of a
buffer, optionally carrying a payload item alongside each value:

* :func:`quickselect` — randomized pivoting with three-way partitioning,
  expected linear time.  Three-way partitioning matters here because price
  buffers are duplicate-heavy (equal vote counts produce equal prices).
* :func:`mom_select` — deterministic median-of-medians (groups of five,
  insertion-sorted), worst-case linear time.

Both permute the caller's buffer in place (a partial partition is left
behind) and never lose or duplicate entries.  Both count value comparisons:
quickselect charges one per element scanned in a partition pass,
mom_select counts actual comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .core import ApportionmentError
from .generators import SplitMix64


class RankOutOfRange(ApportionmentError):
    """Requested order statistic does not exist in the buffer."""


@dataclass(frozen=True)
class SelectionResult:
    value: float
    payload: Any
    comparisons: int


@dataclass
class SelectableBuffer:
    """Parallel arrays of values and optional payload rows."""

    values: np.ndarray
    payload: np.ndarray | None = None

    def __len__(self) -> int:
        return int(self.values.size)


def _check_rank(size: int, r: int) -> None:
    if size == 0:
        raise RankOutOfRange("cannot select from an empty buffer")
    if not 1 <= r <= size:
        raise RankOutOfRange(f"rank {r} outside 1..{size}")


def quickselect(values, r: int, payload=None, seed: int = 0) -> SelectionResult:
    """r-th smallest value (1-based) by seeded randomized quickselect.

    ``values`` (and ``payload``, if given) are reordered in place when they
    are numpy arrays.  The pivot index stream is drawn from a
    :class:`~seatalloc.generators.SplitMix64` seeded with ``seed``, so runs
    are reproducible.
    """
    vals = np.asarray(values, dtype=float)
    pays = None if payload is None else np.asarray(payload)
    _check_rank(vals.size, r)
    rng = SplitMix64(seed)
    comparisons = 0
    lo, hi = 0, int(vals.size)  # active half-open window
    target = r - 1
    while True:
        if hi - lo == 1:
            break
        pivot = vals[lo + rng.next_below(hi - lo)]
        seg = vals[lo:hi]
        less = seg < pivot
        greater = seg > pivot
        equal = ~(less | greater)
        comparisons += hi - lo
        n_less = int(np.count_nonzero(less))
        n_equal = int(np.count_nonzero(equal))
        order = np.concatenate([np.flatnonzero(less),
                                np.flatnonzero(equal),
                                np.flatnonzero(greater)])
        vals[lo:hi] = seg[order]
        if pays is not None:
            pays[lo:hi] = pays[lo:hi][order]
        if target < lo + n_less:
            hi = lo + n_less
        elif target < lo + n_less + n_equal:
            lo, hi = target, target + 1
        else:
            lo = lo + n_less + n_equal
    value = float(vals[target])
    item = None if pays is None else pays[target]
    return SelectionResult(value=value, payload=item, comparisons=comparisons)


def mom_select(values, r: int, payload=None) -> SelectionResult:
    """r-th smallest value (1-based) by deterministic median-of-medians.

    Groups of five are insertion-sorted to pick their medians; the median
    of those medians pivots a three-way partition, recursing only into the
    block containing the target rank.  Worst-case linear comparisons.
    """
    if isinstance(values, np.ndarray):
        buf = values
    else:
        buf = np.asarray(values, dtype=float)
    pays = None if payload is None else np.asarray(payload)
    _check_rank(buf.size, r)
    work = buf.tolist()
    tags = list(range(len(work)))  # tracks the permutation for payload/writeback
    counter = [0]
    idx = _mom(work, tags, 0, len(work), r - 1, counter)
    buf[:] = work
    if pays is not None:
        pays[:] = pays[np.asarray(tags)]
    item = None if pays is None else pays[idx]
    return SelectionResult(value=float(work[idx]), payload=item,
                           comparisons=counter[0])


def _insertion_sort(work, tags, lo, hi, counter):
    for i in range(lo + 1, hi):
        v, t = work[i], tags[i]
        j = i
        while j > lo:
            counter[0] += 1
            if work[j - 1] <= v:
                break
            work[j] = work[j - 1]
            tags[j] = tags[j - 1]
            j -= 1
        work[j] = v
        tags[j] = t


def _mom(work, tags, lo, hi, target, counter):
    """Return the final index of the target order statistic in work[lo:hi]."""
    while True:
        size = hi - lo
        if size <= 5:
            _insertion_sort(work, tags, lo, hi, counter)
            return target
        # Median of each full or partial group of five, compacted to the front.
        n_groups = 0
        for g_lo in range(lo, hi, 5):
            g_hi = min(g_lo + 5, hi)
            _insertion_sort(work, tags, g_lo, g_hi, counter)
            mid = (g_lo + g_hi - 1) // 2
            dest = lo + n_groups
            work[dest], work[mid] = work[mid], work[dest]
            tags[dest], tags[mid] = tags[mid], tags[dest]
            n_groups += 1
        pivot_idx = _mom(work, tags, lo, lo + n_groups,
                         lo + (n_groups - 1) // 2, counter)
        pivot = work[pivot_idx]
        # Three-way partition of work[lo:hi] around the pivot value.
        lt, eq, gt = [], [], []
        lt_t, eq_t, gt_t = [], [], []
        for i in range(lo, hi):
            v = work[i]
            counter[0] += 1
            if v < pivot:
                lt.append(v)
                lt_t.append(tags[i])
            else:
                counter[0] += 1
                if v > pivot:
                    gt.append(v)
                    gt_t.append(tags[i])
                else:
                    eq.append(v)
                    eq_t.append(tags[i])
        work[lo:hi] = lt + eq + gt
        tags[lo:hi] = lt_t + eq_t + gt_t
        first_eq = lo + len(lt)
        first_gt = first_eq + len(eq)
        if target < first_eq:
            hi = first_eq
        elif target < first_gt:
            return target
        else:
            lo = first_gt


_BACKENDS = ("quick", "mom")


def select(values, r: int, payload=None, backend: str = "quick",
           seed: int = 0) -> SelectionResult:
    """Dispatch to a selection backend by name (``quick`` or ``mom``)."""
    if backend == "quick":
        return quickselect(values, r, payload=payload, seed=seed)
    if backend == "mom":
        return mom_select(values, r, payload=payload)
    raise ValueError(f"unknown selection backend {backend!r}; "
                     f"expected one of {_BACKENDS}")
