"""Deterministic measurement-noise stream.

The stream must be reproducible from the seed alone, independent of any
library's generator internals, so it is spelled out here: draw k of the
uniform stream is SplitMix64 (Steele/Lea/Flood mixing constants) applied
in counter mode,

    u_k = mix64(seed + (k+1) * 0x9E3779B97F4A7C15) >> 11, scaled by 2^-53,

which equals the k-th output of the sequential reference generator.
Gaussians use the Box-Muller transform on consecutive uniform pairs, one
gaussian per tick (the sine half is discarded).
"""

from __future__ import annotations

import math

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(x: int) -> int:
    z = x & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def splitmix64(seed: int, k: int) -> int:
    """k-th 64-bit output of SplitMix64 seeded with ``seed`` (k >= 0)."""
    if k < 0:
        raise ValueError(f"stream index must be nonnegative, got {k!r}")
    return _mix64((seed + (k + 1) * _GOLDEN) & _MASK)


def uniform(seed: int, k: int) -> float:
    """k-th uniform draw in [0, 1), 53-bit resolution."""
    return (splitmix64(seed, k) >> 11) * 2.0 ** -53


def gaussian(seed: int, k: int) -> float:
    """k-th standard normal draw (Box-Muller, cosine branch)."""
    u1 = uniform(seed, 2 * k)
    u2 = uniform(seed, 2 * k + 1)
    if u1 <= 0.0:
        u1 = 2.0 ** -53
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
