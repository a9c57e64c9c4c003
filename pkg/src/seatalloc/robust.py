"""Floating-point guard rails shared by every numeric routine in the package.

Seat boundaries are integer-valued quantities recovered from continuous
formulas, so two kinds of protection are needed:

* *nudged* floor/ceil: before truncating, shift the argument by a small
  multiple of its magnitude so that values sitting a rounding error away
  from an integer land on the intended side.  The nudge errs towards
  keeping extra candidates, which callers tolerate; dropping a valid
  candidate would not be recoverable.
* *fuzzy* comparisons: equality and ordering of seat prices use a relative
  tolerance so that algebraically identical quantities computed along
  different code paths compare equal.

Both helpers accept scalars or numpy arrays.
"""

from __future__ import annotations

import os

import numpy as np

#: Relative tolerance used by fuzzy comparisons unless overridden.
DEFAULT_REL_TOL = 1e-9

#: Environment variable consulted by :func:`default_tolerance`.
TOLERANCE_ENV_VAR = "SEATALLOC_TOLERANCE"

#: Magnitude-relative shift applied by the nudged rounders.  Chosen far above
#: accumulated double rounding error (~1e-15 per op) and far below the spacing
#: of adjacent seat boundaries, which is at least 1 in the nudged domain.
NUDGE = 2.0 ** -33


def default_tolerance() -> float:
    """Relative comparison tolerance, honouring the environment override."""
    raw = os.environ.get(TOLERANCE_ENV_VAR)
    if raw is None:
        return DEFAULT_REL_TOL
    value = float(raw)
    if not 0.0 < value < 1.0:
        raise ValueError(f"{TOLERANCE_ENV_VAR} must be in (0, 1), got {raw!r}")
    return value


def resolve_tolerance(rel_tol: float | None) -> float:
    """Return ``rel_tol`` unless it is None, in which case the default."""
    return default_tolerance() if rel_tol is None else rel_tol


def _nudge_for(x):
    return NUDGE * np.maximum(1.0, np.abs(x))


def nudged_floor(x, scale: float = 1.0):
    """Floor of ``x`` after shifting up by ``scale`` nudges.

    ``scale`` widens the shift for retry paths that suspect the default
    nudge was not conservative enough.
    """
    return np.floor(x + scale * _nudge_for(x))


def nudged_ceil(x, scale: float = 1.0):
    """Ceiling of ``x`` after shifting down by ``scale`` nudges."""
    return np.ceil(x - scale * _nudge_for(x))


def fuzzy_scale(x, y):
    """Magnitude used to turn the relative tolerance into an absolute one."""
    return np.maximum(1.0, np.maximum(np.abs(x), np.abs(y)))


def fuzzy_eq(x, y, rel_tol: float | None = None):
    """True where ``x`` and ``y`` agree within the relative tolerance."""
    tol = resolve_tolerance(rel_tol)
    return np.abs(np.asarray(x, dtype=float) - y) <= tol * fuzzy_scale(x, y)


def fuzzy_le(x, y, rel_tol: float | None = None):
    """True where ``x <= y`` up to the relative tolerance."""
    tol = resolve_tolerance(rel_tol)
    return np.asarray(x, dtype=float) - y <= tol * fuzzy_scale(x, y)


def fuzzy_lt(x, y, rel_tol: float | None = None):
    """True where ``x < y`` by more than the relative tolerance."""
    tol = resolve_tolerance(rel_tol)
    return np.asarray(x, dtype=float) - y < -tol * fuzzy_scale(x, y)
