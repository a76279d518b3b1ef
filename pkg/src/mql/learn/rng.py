"""Deterministic 64-bit PRNG used by every seeded operation.

A fixed linear congruential generator (Knuth's MMIX multiplier
6364136223846793005, increment 1442695040888963407, modulus 2**64) seeded
through one SplitMix64 scramble.  Uniform ints use the high 53 bits; the
shuffle is Fisher-Yates.  Results are identical on every platform and
library version.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_MUL = 6364136223846793005
_INC = 1442695040888963407


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


class Lcg64:
    def __init__(self, seed: int):
        self.state = _splitmix64(seed & _MASK)

    def next_u64(self) -> int:
        self.state = (self.state * _MUL + _INC) & _MASK
        return self.state

    def random(self) -> float:
        """Uniform float in [0, 1) from the high 53 bits."""
        return (self.next_u64() >> 11) / (1 << 53)

    def randrange(self, n: int) -> int:
        """Uniform int in [0, n)."""
        if n <= 0:
            raise ValueError("randrange needs n >= 1")
        return (self.next_u64() >> 11) % n

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample_indices(self, n: int, m: int) -> list[int]:
        """m distinct indices from range(n), order random."""
        pool = list(range(n))
        self.shuffle(pool)
        return pool[:m]

    def derive(self, index: int) -> "Lcg64":
        """Independent child stream for (this seed, index)."""
        child = Lcg64(0)
        child.state = _splitmix64(self.state ^ _splitmix64(index))
        return child


def derive_seed(seed: int, index: int) -> int:
    """Deterministic child seed for (seed, index) pairs."""
    return _splitmix64((seed & _MASK) ^ _splitmix64(index))
