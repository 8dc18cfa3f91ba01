"""Deterministic 64-bit PRNG used everywhere randomness is needed.

The generator is SplitMix64: the state advances by the golden-ratio
increment and each output is the mix of the new state through two
shift-multiply rounds.  It is implemented with plain (masked) Python
integer arithmetic so every seeded artifact is bit-identical across
runs, platforms and interpreter versions.  The same mixing function is
re-implemented inside the numba kernels; tests assert the two agree.

    state <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z = state
    z = (z xor (z >> 30)) * 0xBF58476D1CE4E5B9   mod 2^64
    z = (z xor (z >> 27)) * 0x94D049BB133111EB   mod 2^64
    output = z xor (z >> 31)

Floats in [0, 1) take the top 53 bits: (output >> 11) * 2^-53.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB

_INV_2_53 = 2.0 ** -53


def mix64(z: int) -> int:
    """SplitMix64 finalizer: avalanche a 64-bit value."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def pair_hash(seed: int, i: int, j: int) -> int:
    """Deterministic 64-bit hash of an (unordered) index pair.

    Used to derive jitter directions for exactly-coincident nodes; the
    pair is normalized so (i, j) and (j, i) hash identically.
    """
    a, b = (i, j) if i <= j else (j, i)
    z = (seed + GOLDEN * (a + 1) + MIX1 * (b + 1)) & MASK64
    return mix64(z)


def pair_angle(seed: int, i: int, j: int) -> float:
    """Deterministic jitter angle in [0, 2*pi) for a coincident pair."""
    import math

    return (pair_hash(seed, i, j) >> 11) * _INV_2_53 * 2.0 * math.pi


class SplitMix64:
    """Sequential SplitMix64 stream."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        return mix64(self._state)

    def next_float(self) -> float:
        """Uniform in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * _INV_2_53

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.next_float()

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection-free modulo (n << 2^64)."""
        if n <= 0:
            raise ValueError("randrange needs n > 0")
        return self.next_u64() % n
