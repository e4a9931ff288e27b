"""Portable seeded random streams: splitmix64 seeding, xoshiro256++ core,
Box–Muller for normals. Bit-identical on every platform.
"""
from __future__ import annotations

import math
from typing import Iterator

MASK = (1 << 64) - 1
STREAM_STRIDE = 0xD1B54A32D192ED03


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step; returns ``(new_state, output)``."""
    state = (state + 0x9E3779B97F4A7C15) & MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return state, z ^ (z >> 31)


class Xoshiro256pp:
    def __init__(self, seed: int, stream_id: int = 0):
        sm = (seed + stream_id * STREAM_STRIDE) & MASK
        s = []
        for _ in range(4):
            sm, out = splitmix64(sm)
            s.append(out)
        if not any(s):
            s[0] = 1
        self.s = s

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s
        result = (_rotl((s0 + s3) & MASK, 23) + s0) & MASK
        t = (s1 << 17) & MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.s = [s0, s1, s2, s3]
        return result

    def uniform(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


def gaussian_stream(seed: int, stream_id: int = 0) -> Iterator[float]:
    """Infinite stream of standard normals, deterministic per ``(seed, stream_id)``."""
    gen = Xoshiro256pp(seed, stream_id)
    while True:
        u1 = 1.0 - gen.uniform()  # (0, 1], keeps log finite
        u2 = gen.uniform()
        r = math.sqrt(-2.0 * math.log(u1))
        theta = 2.0 * math.pi * u2
        yield r * math.cos(theta)
        yield r * math.sin(theta)
