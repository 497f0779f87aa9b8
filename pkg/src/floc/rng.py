"""Deterministic 64-bit random stream (splitmix64).

All randomized pieces of the package (baseline selectors, synthetic
instances) draw from this one generator so that a seed pins the full
draw sequence on every platform.  The algorithm is splitmix64 exactly as
published by Steele/Lea/Flood: the state advances by the golden-gamma
increment and each output is the two-round xor-multiply finalizer of the
new state.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def derive_seed(seed: int, stream: int) -> int:
    """Stable sub-stream seed, used to give each block its own generator."""
    return _mix((seed ^ ((stream + 1) * _GAMMA)) & _MASK)


class Rng:
    """Seedable splitmix64 stream; identical seeds give identical draws."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        return _mix(self.state)

    def next_float(self) -> float:
        """Uniform draw in [0, 1) with 53 random mantissa bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def next_below(self, bound: int) -> int:
        """Uniform-ish draw in [0, bound) via modulo; bias < 2^-40 for bound < 2^24."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() % bound

    def fill_u64(self, count: int) -> np.ndarray:
        """Vectorized next_u64: bit-identical to `count` sequential calls."""
        steps = np.arange(1, count + 1, dtype=np.uint64)
        z = np.uint64(self.state) + steps * np.uint64(_GAMMA)  # wraps mod 2^64
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        z ^= z >> np.uint64(31)
        self.state = (self.state + count * _GAMMA) & _MASK
        return z

    def fill_normal(self, count: int) -> np.ndarray:
        """Standard-normal draws (float64) via Box-Muller on fill_u64 pairs.

        The transform is pinned (u1 in (0,1], u2 in [0,1), cos for even
        outputs, sin for odd) so seeded instances are reproducible.
        """
        pairs = (count + 1) // 2
        raw = self.fill_u64(2 * pairs)
        u1 = ((raw[0::2] >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53
        u2 = (raw[1::2] >> np.uint64(11)).astype(np.float64) * 2.0**-53
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = 2.0 * np.pi * u2
        out = np.empty(2 * pairs, dtype=np.float64)
        out[0::2] = radius * np.cos(angle)
        out[1::2] = radius * np.sin(angle)
        return out[:count]
