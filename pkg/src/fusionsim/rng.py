"""Portable deterministic random numbers.

The generator is xorshift64* (Vigna's multiplied xorshift with the
triplet 12/25/27 and multiplier 0x2545F4914F6CDD1D).  The whole
simulator draws through this one generator so that schedules and
sampled lengths reproduce bit for bit from (parameters, seed) on any
platform; nothing here depends on the host's random module state.

Seeds are first diffused through one round of splitmix64 so that small
consecutive seeds (0, 1, 2, ...) land in unrelated parts of the state
space, and so that the forbidden all-zero xorshift state can never be
reached.  A `stream` tag is mixed in the same way, giving independent
substreams (arrival times vs. output lengths) from a single user seed.
"""

from __future__ import annotations

import math

_MASK = (1 << 64) - 1
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
_STAR_MULT = 0x2545F4914F6CDD1D


def _splitmix64(x: int) -> int:
    x = (x + _SPLITMIX_GAMMA) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(seed: int, stream: int) -> int:
    """Mix a user seed with a stream tag into a fresh 64-bit seed."""
    return _splitmix64((seed & _MASK) ^ _splitmix64(stream & _MASK))


class Xorshift64Star:
    """xorshift64* stream; uniform doubles carry 53 random bits."""

    def __init__(self, seed: int, stream: int = 0):
        state = derive_seed(seed, stream)
        if state == 0:
            state = _SPLITMIX_GAMMA
        self._state = state

    def next_u64(self) -> int:
        x = self._state
        x ^= x >> 12
        x ^= (x << 25) & _MASK
        x ^= x >> 27
        self._state = x
        return (x * _STAR_MULT) & _MASK

    def next_float(self) -> float:
        """Uniform double in [0, 1) built from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def exponential(self, mean: float) -> float:
        """Inverse-CDF exponential draw with the given mean."""
        # next_float() < 1, so the argument to log1p stays in (-1, 0].
        return -mean * math.log1p(-self.next_float())

    def uniform_int(self, lo: int, hi: int) -> int:
        """Uniform integer on the inclusive range [lo, hi]."""
        span = hi - lo + 1
        return lo + int(self.next_float() * span)
