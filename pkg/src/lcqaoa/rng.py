"""Deterministic SplitMix64 pseudo-random generator.

The generator is fully specified here so that seeded results are bit-identical
on every platform and independent of numpy's or CPython's RNG versions.

State: one unsigned 64-bit integer ``s``.
Update: ``s <- (s + 0x9E3779B97F4A7C15) mod 2**64``.
Output: ``mix(s)`` where::

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z =  z ^ (z >> 31)                       (all arithmetic mod 2**64)

Because output ``k`` (0-based) of a stream started at ``s0`` equals
``mix(s0 + (k + 1) * GOLDEN)``, the stream is counter-based and
:func:`uniform_block` can produce any slice of it vectorised with numpy.
Floats use the top 53 bits: ``(u64 >> 11) * 2**-53`` in [0, 1).
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_INV53 = 1.0 / (1 << 53)


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *keys: int) -> int:
    """Child seed for the stream identified by ``keys`` under ``seed``.

    Used wherever independent sub-streams are needed (per trajectory, per
    restart) so that results do not depend on evaluation order.
    """
    s = mix64(seed & MASK64)
    for k in keys:
        s = mix64(s ^ mix64((k & MASK64) + GOLDEN))
    return s


class SplitMix64:
    """Sequential interface to the SplitMix64 stream."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)

    def random(self) -> float:
        return (self.next_u64() >> 11) * _INV53

    def randbelow(self, k: int) -> int:
        """Uniform integer in ``[0, k)`` (rejection sampling, no modulo bias)."""
        if k <= 0:
            raise ValueError("k must be positive")
        limit = ((1 << 64) // k) * k
        while True:
            r = self.next_u64()
            if r < limit:
                return r % k

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def permutation(self, k: int) -> list[int]:
        items = list(range(k))
        self.shuffle(items)
        return items

    def choice(self, items):
        return items[self.randbelow(len(items))]


def uniform_block(seed: int, start: int, count: int) -> np.ndarray:
    """Outputs ``start .. start+count-1`` of the stream seeded by ``seed`` as floats in [0, 1)."""
    counters = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(seed & MASK64) + counters * np.uint64(GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * _INV53
