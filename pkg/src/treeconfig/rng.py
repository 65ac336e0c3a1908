"""Tiny deterministic 64-bit generator (splitmix64).

Used wherever the library itself needs seeded choices (e.g. picking ball
centers for mass-growth estimation) so that identical seeds reproduce
identical output across platforms and language runtimes. Constants are the
standard splitmix64 ones.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


class SplitMix64:
    """splitmix64 stream: state += 0x9E3779B97F4A7C15, output mixed."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform-ish integer in [0, n) by modulo (fine for n << 2^64)."""
        if n <= 0:
            raise ValueError("n must be positive")
        return self.next_u64() % n

    def distinct_below(self, n: int, count: int) -> list[int]:
        """`count` distinct integers in [0, n), in draw order."""
        if count > n:
            raise ValueError(f"cannot draw {count} distinct values below {n}")
        seen: set[int] = set()
        out: list[int] = []
        while len(out) < count:
            v = self.below(n)
            if v not in seen:
                seen.add(v)
                out.append(v)
        return out
