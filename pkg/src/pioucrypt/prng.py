"""Deterministic pseudo-random sources for the pioucrypt pipeline.

Two generators drive all randomness: Xorshift1024* (pixel scrambling) and a
triple linear congruential generator, "TLCG" (lattice construction and
factorization start points). Everything is plain Python integer arithmetic so
sequences are bit-exact across platforms; the sequence consumed by each caller
is part of the key-material contract.

The module also carries the XOR bias law for independent biased bits, used to
sanity-check the generators' bit streams.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import AllZeroState, InvalidRange

_MASK64 = (1 << 64) - 1

# Output multiplier of Xorshift1024*.
XS1024_MULTIPLIER = 0x106689D45497FDB5

# Mixed congruential step (mod 2^64) used to expand one seed word into the
# 16-word generator state.
SEED_EXPAND_MULTIPLIER = 6364136223846793005
SEED_EXPAND_INCREMENT = 1442695040888963407


class Xorshift1024:
    """Xorshift1024*: 16 words of 64-bit state with a star output scrambler.

    One instance must be advanced by a single logical owner at a time;
    independent instances can run concurrently.
    """

    __slots__ = ("s", "p")

    def __init__(self, seed: int):
        if not 0 <= seed <= _MASK64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        state = []
        x = seed
        for _ in range(16):
            x = (SEED_EXPAND_MULTIPLIER * x + SEED_EXPAND_INCREMENT) & _MASK64
            state.append(x)
        if not any(state):
            # unreachable for the fixed expansion constants; kept as a guard
            raise AllZeroState("seed expansion produced an all-zero state")
        self.s = state
        self.p = 0

    @classmethod
    def from_state(cls, words: Sequence[int], index: int = 0) -> "Xorshift1024":
        """Build a generator from 16 explicit state words and a word index."""
        words = [int(w) for w in words]
        if len(words) != 16 or not all(0 <= w <= _MASK64 for w in words):
            raise ValueError("state must be 16 unsigned 64-bit words")
        if not any(words):
            raise AllZeroState("the all-zero state is absorbing")
        if not 0 <= index <= 15:
            raise ValueError("state index must be in 0..15")
        gen = cls.__new__(cls)
        gen.s = words
        gen.p = index
        return gen

    def clone(self) -> "Xorshift1024":
        gen = Xorshift1024.__new__(Xorshift1024)
        gen.s = list(self.s)
        gen.p = self.p
        return gen

    def next_u64(self) -> int:
        """Advance one step and return the next 64-bit output."""
        s = self.s
        s0 = s[self.p]
        self.p = p = (self.p + 1) & 15
        s1 = s[p]
        s1 ^= (s1 << 31) & _MASK64
        s1 ^= s0 ^ (s1 >> 11) ^ (s0 >> 30)
        s[p] = s1
        return (s1 * XS1024_MULTIPLIER) & _MASK64

    def fill_u64(self, count: int) -> list[int]:
        """Draw `count` outputs in one call (hot path for the bias checks)."""
        s = self.s
        p = self.p
        mask = _MASK64
        mult = XS1024_MULTIPLIER
        out = [0] * count
        for k in range(count):
            s0 = s[p]
            p = (p + 1) & 15
            s1 = s[p]
            s1 ^= (s1 << 31) & mask
            s1 ^= s0 ^ (s1 >> 11) ^ (s0 >> 30)
            s[p] = s1
            out[k] = (s1 * mult) & mask
        self.p = p
        return out

    def randint(self, lo: int, hi: int) -> int:
        """Integer in the closed range [lo, hi]; always consumes one draw.

        Plain modulo mapping: the bias is negligible for the byte and index
        ranges used here and keeps the draw sequence trivially portable.
        """
        if lo > hi:
            raise InvalidRange(f"empty range: lo={lo} > hi={hi}")
        return lo + self.next_u64() % (hi - lo + 1)


@dataclass(frozen=True)
class LcgParams:
    """One congruential stream configuration: x -> (a*x + c) mod m."""

    modulus: int
    multiplier: int
    increment: int
    seed: int

    def __post_init__(self):
        if self.modulus <= 0:
            raise ValueError("modulus must be positive")
        if not 0 < self.multiplier < self.modulus:
            raise ValueError("multiplier must satisfy 0 < a < m")
        if not 0 <= self.increment < self.modulus:
            raise ValueError("increment must satisfy 0 <= c < m")
        if not 0 <= self.seed < self.modulus:
            raise ValueError("seed must satisfy 0 <= x < m")


def lcg_step(x: int, multiplier: int, increment: int, modulus: int) -> int:
    """One step of x -> (a*x + c) mod m.

    Python integers widen automatically, so the product never overflows.
    """
    if modulus <= 0:
        raise ValueError("modulus must be positive")
    return (multiplier * x + increment) % modulus


DEFAULT_TLCG_MODULUS = 2**31 - 1
DEFAULT_TLCG_MULTIPLIERS = (16807, 48271, 69621)
DEFAULT_TLCG_INCREMENTS = (12345, 67891, 1013904223)

# Per-stream seed offsets so one master seed yields three distinct streams.
_STREAM_SEED_OFFSETS = (0x9E3779B9, 0x85EBCA6B, 0xC2B2AE35)


class Tlcg:
    """Three independent congruential streams, summed then range-reduced.

    `randrange(lo, hi)` is half-open: the reduction modulus is `hi - lo`, so
    `hi` itself is never produced. Callers that need an inclusive upper bound
    pass `hi + 1`.
    """

    __slots__ = ("streams", "values")

    def __init__(self, streams: Iterable[LcgParams]):
        streams = tuple(streams)
        if len(streams) != 3 or not all(isinstance(s, LcgParams) for s in streams):
            raise ValueError("Tlcg needs exactly three LcgParams streams")
        self.streams = streams
        self.values = [s.seed for s in streams]

    @classmethod
    def from_seed(
        cls,
        seed: int,
        modulus: int = DEFAULT_TLCG_MODULUS,
        multipliers: Sequence[int] = DEFAULT_TLCG_MULTIPLIERS,
        increments: Sequence[int] = DEFAULT_TLCG_INCREMENTS,
    ) -> "Tlcg":
        """Derive the three per-stream seeds from a single master seed."""
        if seed < 0:
            raise ValueError("seed must be non-negative")
        streams = tuple(
            LcgParams(modulus, a, c, (seed + off) % modulus)
            for a, c, off in zip(multipliers, increments, _STREAM_SEED_OFFSETS)
        )
        return cls(streams)

    def clone(self) -> "Tlcg":
        gen = Tlcg.__new__(Tlcg)
        gen.streams = self.streams
        gen.values = list(self.values)
        return gen

    def randrange(self, lo: int, hi: int) -> int:
        """Value in [lo, hi); advances all three streams exactly once."""
        if hi <= lo:
            raise InvalidRange(f"empty range: [{lo}, {hi})")
        total = 0
        for k, st in enumerate(self.streams):
            v = (st.multiplier * self.values[k] + st.increment) % st.modulus
            self.values[k] = v
            total += v
        return total % (hi - lo) + lo

    def next_unit(self) -> float:
        """Uniform draw in (0, 1] with 24-bit resolution."""
        return (self.randrange(0, 1 << 24) + 1) * 2.0**-24


def _check_unit(value: float, name: str) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")


def xor_bias_expected(p: float, q: float) -> float:
    """Expected value of X xor Y for independent bits with means p and q."""
    _check_unit(p, "p")
    _check_unit(q, "q")
    return p + q - 2.0 * p * q


def xor_bias_empirical(p: float, q: float, n: int, rng: Xorshift1024) -> float:
    """Empirical mean of X xor Y over n independent bit pairs.

    Bits come from thresholding generator outputs mapped to [0, 1) at 53-bit
    resolution; each pair consumes the X draw first, then the Y draw.
    """
    _check_unit(p, "p")
    _check_unit(q, "q")
    if n < 1:
        raise ValueError("sample count must be >= 1")
    draws = np.array(rng.fill_u64(2 * n), dtype=np.uint64)
    u = (draws >> np.uint64(11)).astype(np.float64) * 2.0**-53
    x = u[0::2] < p
    y = u[1::2] < q
    return float(np.mean(x != y))
