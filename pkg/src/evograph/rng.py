"""Counter-based splittable pseudo-random streams.

Every stream is a pure function of (seed, counter), so derived streams — one
per Monte Carlo trial, sweep cell, or stabilizer draw — produce identical
output no matter how work is scheduled across threads or processes. The
generator is the SplitMix64 finalizer over a Weyl sequence; statistical
quality is ample for the event sampling done here.
"""
from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_U53 = float(1 << 53)


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a 64-bit bijective hash."""
    z &= MASK64
    z ^= z >> 30
    z = (z * _M1) & MASK64
    z ^= z >> 27
    z = (z * _M2) & MASK64
    z ^= z >> 31
    return z


def derive_seed(master: int, index: int) -> int:
    """Deterministic child seed for stream ``index`` under ``master``."""
    return mix64((master & MASK64) ^ mix64(((index & MASK64) + 1) * GOLDEN))


class Stream:
    """A counter-based random stream; draws are reproducible by construction."""

    __slots__ = ("seed", "counter")

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self.counter = 0

    def next_u64(self) -> int:
        self.counter += 1
        return mix64((self.seed + self.counter * GOLDEN) & MASK64)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) / _U53

    def randrange(self, k: int) -> int:
        """Uniform integer in [0, k)."""
        if k <= 0:
            raise ValueError(f"randrange needs k >= 1, got {k}")
        return int(self.random() * k)

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def sample_indices(self, n: int, k: int) -> list[int]:
        """k distinct indices from range(n), via partial Fisher-Yates."""
        if not 0 <= k <= n:
            raise ValueError(f"cannot sample {k} of {n}")
        pool = list(range(n))
        for i in range(k):
            j = i + self.randrange(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    def spawn(self, index: int) -> "Stream":
        """Independent child stream; pure function of (seed, index)."""
        return Stream(derive_seed(self.seed, index))
