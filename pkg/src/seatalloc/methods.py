"""Divisor methods for proportional apportionment.

A divisor method is described by a strictly increasing divisor sequence
``d_0 < d_1 < d_2 < ...`` with ``d_0 >= 0``.  Party ``i`` with vote count
``v_i`` pays the price ``d_j / v_i`` for its ``(j+1)``-th seat, and seats go
to the ``k`` cheapest prices overall.

Each method carries a continuous continuation ``delta`` of its sequence
(``delta(j) == d_j`` for integer ``j``) together with a constant-time
inverse, plus linear *sandwich* bounds

    alpha * x + beta_lo  <=  delta(x)  <=  alpha * x + beta_hi

which power the estimator-based and selection-based allocators.

Built-in methods (divisor sequence / continuation):

====================== ============================ =====================
name                   sequence                     delta(x)
====================== ============================ =====================
smallest-divisors      0, 1, 2, 3, ...              x
greatest-divisors      1, 2, 3, 4, ...              x + 1
sainte-lague           1, 3, 5, 7, ...              2x + 1
modified-sainte-lague  1.4, 3, 5, 7, ...            2x+1 (x>=1), 1.6x+1.4
equal-proportions      0, sqrt(2), sqrt(6), ...     sqrt(x(x+1))
harmonic-mean          0, 4/3, 12/5, 24/7, ...      2x(x+1)/(2x+1)
imperiali              2, 3, 4, 5, ...              x + 2
danish                 1, 4, 7, 10, ...             3x + 1
====================== ============================ =====================

Parametric families are available through :func:`get_method` as
``stationary:<r>`` (sequence ``j + r``), ``linear:<alpha>,<beta>``
(sequence ``alpha*j + beta``) and ``power-mean:<p>`` for
``p in {-inf, -1, 0, 1, 2, inf}`` (sequence of power means of consecutive
integers, ``d_j = mean_p(j, j+1)``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Exponents for which the power-mean family has a closed-form inverse.
POWER_MEAN_EXPONENTS = (-math.inf, -1.0, 0.0, 1.0, 2.0, math.inf)

_SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class DivisorMethod:
    """A divisor method with continuation, inverse and sandwich bounds.

    ``intercept`` is the exact intercept ``beta`` for methods whose
    continuation is the straight line ``alpha*x + beta``; it is ``None``
    for genuinely non-linear continuations.  ``power`` records the
    exponent for power-mean methods.
    """

    name: str
    kind: str
    alpha: float
    beta_lo: float
    beta_hi: float
    intercept: float | None = None
    power: float | None = None

    # -- basic queries ----------------------------------------------------

    @property
    def sandwich(self) -> tuple[float, float, float]:
        """``(alpha, beta_lo, beta_hi)`` of the linear sandwich."""
        return (self.alpha, self.beta_lo, self.beta_hi)

    @property
    def is_exactly_linear(self) -> bool:
        return self.intercept is not None

    @property
    def first_divisor(self) -> float:
        """``d_0``, the price multiplier of every party's first seat."""
        return float(self.delta(0))

    def divisor(self, j):
        """``d_j`` for integer ``j >= 0`` (scalar or array)."""
        return self.delta(j)

    # -- continuation ------------------------------------------------------

    def delta(self, x):
        """Continuous, strictly increasing continuation of the sequence."""
        if self.intercept is not None:
            if isinstance(x, (int, float)):
                return self.alpha * x + self.intercept
            return self.alpha * np.asarray(x, dtype=float) + self.intercept
        x = np.asarray(x, dtype=float)
        if self.kind == "modified-sainte-lague":
            out = np.where(x >= 1.0, 2.0 * x + 1.0, 1.6 * x + 1.4)
        elif self.power == 0.0:
            out = np.sqrt(x * (x + 1.0))
        elif self.power == -1.0:
            out = 2.0 * x * (x + 1.0) / (2.0 * x + 1.0)
        elif self.power == 2.0:
            out = np.sqrt((x * x + (x + 1.0) ** 2) / 2.0)
        else:  # pragma: no cover - constructors forbid this
            raise AssertionError(f"no continuation for {self!r}")
        return out if out.ndim else float(out)

    def delta_inv(self, y):
        """Inverse of :meth:`delta`, defined on all of the real line.

        For ``y >= d_0`` this is the exact functional inverse.  Below
        ``d_0`` it returns a value in ``[-1, 0)`` (the clamped linear form
        ``max((y - beta_hi)/alpha, -1)``), so that ``floor(delta_inv(y)) + 1``
        counts seats correctly even for prices no party has to pay.
        """
        if self.intercept is not None:
            if isinstance(y, (int, float)):
                return max((y - self.intercept) / self.alpha, -1.0)
            y = np.asarray(y, dtype=float)
            return np.maximum((y - self.intercept) / self.alpha, -1.0)
        y = np.asarray(y, dtype=float)
        below = np.maximum((y - self.beta_hi) / self.alpha, -1.0)
        if self.kind == "modified-sainte-lague":
            out = np.where(y >= 3.0, (y - 1.0) / 2.0,
                           np.maximum((y - 1.4) / 1.6, -1.0))
        elif self.power == 0.0:
            exact = 0.5 * (np.sqrt(1.0 + 4.0 * y * y) - 1.0)
            out = np.where(y >= 0.0, exact, below)
        elif self.power == -1.0:
            exact = 0.5 * (y - 1.0 + np.sqrt(y * y + 1.0))
            out = np.where(y >= 0.0, exact, below)
        elif self.power == 2.0:
            disc = np.maximum(4.0 * y * y - 1.0, 0.0)
            exact = 0.5 * (np.sqrt(disc) - 1.0)
            out = np.where(y >= _SQRT_HALF, exact, below)
        else:  # pragma: no cover
            raise AssertionError(f"no inverse for {self!r}")
        return out if out.ndim else float(out)

    def __str__(self) -> str:
        return self.name


# -- constructors ----------------------------------------------------------


def linear_method(alpha: float, beta: float, name: str | None = None,
                  kind: str = "linear") -> DivisorMethod:
    """Method with divisor sequence ``alpha*j + beta`` (``alpha>0, beta>=0``).

    The lower sandwich intercept is clamped to ``alpha`` when ``beta``
    exceeds it, which keeps the candidate-window algebra valid for
    front-loaded sequences such as Imperiali.
    """
    alpha = float(alpha)
    beta = float(beta)
    if not (alpha > 0.0 and math.isfinite(alpha)):
        raise ValueError(f"alpha must be a positive real, got {alpha}")
    if not (beta >= 0.0 and math.isfinite(beta)):
        raise ValueError(f"beta must be a non-negative real, got {beta}")
    if name is None:
        name = f"linear:{alpha:g},{beta:g}"
    return DivisorMethod(name=name, kind=kind, alpha=alpha,
                         beta_lo=min(beta, alpha), beta_hi=beta,
                         intercept=beta)


def stationary_method(r: float, name: str | None = None) -> DivisorMethod:
    """Method with divisor sequence ``j + r`` for ``0 < r < 1``."""
    r = float(r)
    if not 0.0 < r < 1.0:
        raise ValueError(f"stationary parameter must be in (0, 1), got {r}")
    return linear_method(1.0, r, name=name or f"stationary:{r:g}",
                         kind="stationary")


def power_mean_method(p: float, name: str | None = None) -> DivisorMethod:
    """Method whose ``j``-th divisor is the p-power mean of ``j`` and ``j+1``.

    Only exponents with closed-form inverses are supported:
    ``-inf`` (minimum, = smallest-divisors), ``-1`` (harmonic mean),
    ``0`` (geometric mean), ``1`` (arithmetic mean), ``2`` (quadratic
    mean) and ``inf`` (maximum, = greatest-divisors).

    The sandwich uses that ``delta(x) - (x + 1/2)`` shrinks monotonically
    to zero: one intercept is ``1/2`` and the other is ``delta(0)``.
    """
    p = float(p)
    if p not in POWER_MEAN_EXPONENTS:
        allowed = ", ".join(f"{q:g}" for q in POWER_MEAN_EXPONENTS)
        raise ValueError(f"power-mean exponent must be one of {allowed}, got {p}")
    if name is None:
        name = f"power-mean:{p:g}"
    kind = "power-mean"
    if p == -math.inf:
        return linear_method(1.0, 0.0, name=name, kind=kind)
    if p == math.inf:
        return linear_method(1.0, 1.0, name=name, kind=kind)
    if p == 1.0:
        return linear_method(1.0, 0.5, name=name, kind=kind)
    if p == 2.0:
        beta_lo, beta_hi = 0.5, _SQRT_HALF
    else:  # p in {-1, 0}: mean of (0, 1) degenerates to 0
        beta_lo, beta_hi = 0.0, 0.5
    return DivisorMethod(name=name, kind=kind, alpha=1.0,
                         beta_lo=beta_lo, beta_hi=beta_hi, power=p)


def modified_sainte_lague_method() -> DivisorMethod:
    """Sainte-Lague with the raised first divisor 1.4.

    The continuation is ``2x + 1`` for ``x >= 1`` and ``1.6x + 1.4``
    below, which hits 1.4 at zero and joins continuously at ``x = 1``;
    it sits between ``2x + 1`` and ``2x + 1.4``.
    """
    return DivisorMethod(name="modified-sainte-lague",
                         kind="modified-sainte-lague",
                         alpha=2.0, beta_lo=1.0, beta_hi=1.4)


_BUILTINS = {
    "smallest-divisors": lambda: linear_method(1.0, 0.0, "smallest-divisors"),
    "greatest-divisors": lambda: linear_method(1.0, 1.0, "greatest-divisors"),
    "sainte-lague": lambda: linear_method(2.0, 1.0, "sainte-lague"),
    "modified-sainte-lague": modified_sainte_lague_method,
    "equal-proportions": lambda: power_mean_method(0.0, "equal-proportions"),
    "harmonic-mean": lambda: power_mean_method(-1.0, "harmonic-mean"),
    "imperiali": lambda: linear_method(1.0, 2.0, "imperiali"),
    "danish": lambda: linear_method(3.0, 1.0, "danish"),
}


def builtin_method_names() -> tuple[str, ...]:
    return tuple(_BUILTINS)


def builtin_methods() -> tuple[DivisorMethod, ...]:
    return tuple(factory() for factory in _BUILTINS.values())


def _parse_exponent(text: str) -> float:
    text = text.strip().lower()
    if text in ("-inf", "-infinity"):
        return -math.inf
    if text in ("inf", "+inf", "infinity"):
        return math.inf
    return float(text)


def get_method(spec: str) -> DivisorMethod:
    """Look up a built-in method or build a parametric one from a string.

    Accepted forms: a built-in name (see :func:`builtin_method_names`),
    ``stationary:<r>``, ``linear:<alpha>,<beta>`` or ``power-mean:<p>``.
    """
    spec = spec.strip()
    if spec in _BUILTINS:
        return _BUILTINS[spec]()
    family, sep, args = spec.partition(":")
    if not sep:
        raise ValueError(f"unknown divisor method {spec!r}")
    try:
        if family == "stationary":
            return stationary_method(float(args))
        if family == "linear":
            parts = args.split(",")
            if len(parts) != 2:
                raise ValueError("linear takes exactly two parameters")
            return linear_method(float(parts[0]), float(parts[1]))
        if family == "power-mean":
            return power_mean_method(_parse_exponent(args))
    except ValueError as exc:
        raise ValueError(f"bad method spec {spec!r}: {exc}") from exc
    raise ValueError(f"unknown divisor method family {family!r}")
