"""Seeded, portable randomness for reproducible constructions.

SplitMix64 is the one generator used wherever a construction is
randomized.  It is tiny, well known, and identical on every platform,
so a recorded seed replays byte for byte.  Streams are split
deterministically: ``child_seed(seed, k)`` is the (k+1)-th output of a
SplitMix64 started at ``seed``, which lets retries and per-zone draws
be re-derived independently from one master seed.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def randbelow(self, bound: int) -> int:
        """Uniform draw from range(bound), unbiased via rejection."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (MASK64 + 1) - (MASK64 + 1) % bound
        while True:
            v = self.next_u64()
            if v < limit:
                return v % bound

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle driven by this stream."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]


def child_seed(seed: int, index: int) -> int:
    """Deterministic child stream seed: the (index+1)-th SplitMix64 output."""
    if index < 0:
        raise ValueError("index must be nonnegative")
    gen = SplitMix64(seed)
    value = gen.next_u64()
    for _ in range(index):
        value = gen.next_u64()
    return value
