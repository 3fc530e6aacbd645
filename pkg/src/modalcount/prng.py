"""SplitMix64, the portable generator behind every sampled result.

The state advances by 0x9E3779B97F4A7C15 per draw and each output is the
standard 64-bit finalizer of the new state.  Because output ``i`` depends
only on ``seed + (i + 1) * gamma``, blocks of draws can be produced with
numpy without changing the stream.
"""

from __future__ import annotations

import numpy as np

GAMMA = 0x9E3779B97F4A7C15
MASK = (1 << 64) - 1


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK

    def next(self) -> int:
        self.state = (self.state + GAMMA) & MASK
        return mix64(self.state)

    def block(self, count: int) -> np.ndarray:
        """The next ``count`` outputs as a uint64 array; same values as calling :meth:`next`."""
        steps = np.arange(1, count + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self.state) + steps * np.uint64(GAMMA)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
            z = z ^ (z >> np.uint64(31))
        self.state = (self.state + count * GAMMA) & MASK
        return z

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection on the top bits."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        bits = max(bound - 1, 1).bit_length()
        while True:
            x = self.next() >> (64 - bits)
            if x < bound:
                return x
