"""Deterministic random instance generation.

Reproducibility across runs — and across reimplementations in other
languages — matters more here than raw entropy, so randomness comes from a
small, fully specified counter-based generator instead of a platform RNG:

    output(i) = mix64((seed + i * 0x9E3779B97F4A7C15) mod 2**64)   i = 1, 2, ...

where ``mix64`` is the finalizer

    z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
    z ^= z >> 27;  z *= 0x94D049BB133111EB
    z ^= z >> 31

(all arithmetic mod 2**64).  Uniform doubles in ``[0, 1)`` take the top 53
bits: ``(output >> 11) * 2**-53``.  Because the stream is a pure function
of ``(seed, counter)``, scalar and vectorised draws interleave freely.

Vote distributions (every drawn vote is strictly positive; zero draws are
rejected and redrawn):

* ``uniform``       — uniform on ``[lo, hi)``, default ``(1, 3)``
* ``exponential``   — mean ``m``, default ``2``
* ``poisson``       — rate ``m`` with zero-rejection, default ``2``
* ``pareto``        — shape ``a``, scale ``s``, defaults ``(1.5, 1)``;
  heavy-tailed, producing the unbalanced instances that stress allocators
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Instance

_MASK = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX_1 = 0xBF58476D1CE4E5B9
_MIX_2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """The 64-bit finalizer at the heart of the generator."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX_1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX_2) & _MASK
    return (z ^ (z >> 31)) & _MASK


def derive_seed(master: int, index: int) -> int:
    """Documented seed-splitting for parallel or per-instance streams.

    ``child = mix64(mix64(master) XOR ((index + 1) * gamma mod 2**64))``.
    Distinct indices give decorrelated child streams deterministically.
    """
    if index < 0:
        raise ValueError("stream index must be non-negative")
    return mix64(mix64(master) ^ (((index + 1) * GOLDEN_GAMMA) & _MASK))


class SplitMix64:
    """Counter-based stream over the fixed increment 0x9E3779B97F4A7C15."""

    def __init__(self, seed: int, counter: int = 0):
        self.seed = int(seed) & _MASK
        self.counter = int(counter)

    def next_u64(self) -> int:
        self.counter += 1
        return mix64((self.seed + self.counter * GOLDEN_GAMMA) & _MASK)

    def next_below(self, n: int) -> int:
        """Uniform-ish integer in ``[0, n)`` (modulo bias is negligible
        for the buffer sizes selected against here)."""
        return self.next_u64() % n

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * 2.0 ** -53

    def uniforms(self, n: int) -> np.ndarray:
        """Vectorised draw of ``n`` doubles, identical to ``n`` scalar draws."""
        if n == 0:
            return np.empty(0, dtype=float)
        idx = np.arange(self.counter + 1, self.counter + n + 1, dtype=np.uint64)
        self.counter += n
        z = np.uint64(self.seed) + idx * np.uint64(GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX_1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX_2)
        z = z ^ (z >> np.uint64(31))
        return (z >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


@dataclass(frozen=True)
class VoteDistribution:
    """A named vote-count distribution with its parameters."""

    kind: str
    params: tuple[float, ...]

    @property
    def name(self) -> str:
        args = ",".join(f"{p:g}" for p in self.params)
        return f"{self.kind}:{args}"

    def __str__(self) -> str:
        return self.name


_DEFAULT_PARAMS = {
    "uniform": (1.0, 3.0),
    "exponential": (2.0,),
    "poisson": (2.0,),
    "pareto": (1.5, 1.0),
}


def distribution_names() -> tuple[str, ...]:
    return tuple(_DEFAULT_PARAMS)


def parse_distribution(spec: str) -> VoteDistribution:
    """Parse ``kind`` or ``kind:p1[,p2]`` into a validated distribution."""
    spec = spec.strip()
    kind, sep, args = spec.partition(":")
    if kind not in _DEFAULT_PARAMS:
        raise ValueError(f"unknown distribution {kind!r}; "
                         f"expected one of {distribution_names()}")
    if not sep or not args:
        params = _DEFAULT_PARAMS[kind]
    else:
        params = tuple(float(p) for p in args.split(","))
    expected = len(_DEFAULT_PARAMS[kind])
    if len(params) != expected:
        raise ValueError(f"{kind} takes {expected} parameter(s), got {params}")
    if kind == "uniform":
        lo, hi = params
        if not (0.0 <= lo < hi):
            raise ValueError(f"uniform needs 0 <= lo < hi, got {params}")
    elif kind in ("exponential", "poisson"):
        if params[0] <= 0.0:
            raise ValueError(f"{kind} needs a positive mean, got {params[0]}")
    elif kind == "pareto":
        shape, scale = params
        if shape <= 0.0 or scale <= 0.0:
            raise ValueError(f"pareto needs positive shape and scale, got {params}")
    return VoteDistribution(kind=kind, params=params)


def _rejection_positive(rng: SplitMix64, n: int, transform) -> np.ndarray:
    """Draw through ``transform`` until every vote is strictly positive."""
    out = transform(rng.uniforms(n))
    bad = ~(out > 0.0)
    while np.any(bad):
        out[bad] = transform(rng.uniforms(int(np.count_nonzero(bad))))
        bad = ~(out > 0.0)
    return out


def _poisson_positive(rng: SplitMix64, n: int, mean: float) -> np.ndarray:
    floor_p = math.exp(-mean)
    out = np.empty(n, dtype=float)
    for i in range(n):
        while True:
            count = 0
            p = 1.0
            while True:
                p *= rng.uniform()
                if p <= floor_p:
                    break
                count += 1
            if count > 0:
                out[i] = float(count)
                break
    return out


def gen_votes(dist: VoteDistribution, n: int, seed: int) -> np.ndarray:
    """``n`` strictly positive vote counts drawn from ``dist``."""
    if n < 1:
        raise ValueError(f"need at least one party, got n={n}")
    rng = SplitMix64(seed)
    if dist.kind == "uniform":
        lo, hi = dist.params
        return _rejection_positive(rng, n, lambda u: lo + u * (hi - lo))
    if dist.kind == "exponential":
        mean = dist.params[0]
        return _rejection_positive(rng, n, lambda u: -mean * np.log1p(-u))
    if dist.kind == "pareto":
        shape, scale = dist.params
        return _rejection_positive(
            rng, n, lambda u: scale * (1.0 - u) ** (-1.0 / shape))
    if dist.kind == "poisson":
        return _poisson_positive(rng, n, dist.params[0])
    raise ValueError(f"unknown distribution kind {dist.kind!r}")


def gen_instance(dist: VoteDistribution, n: int, multiplier: int,
                 seed: int) -> Instance:
    """Instance with ``n`` parties and ``k = multiplier * n`` seats."""
    if int(multiplier) != multiplier or multiplier < 1:
        raise ValueError(f"seat multiplier must be a positive integer, "
                         f"got {multiplier!r}")
    votes = gen_votes(dist, n, seed)
    return Instance(votes=votes, house_size=int(multiplier) * n)
