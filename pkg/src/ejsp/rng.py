"""Deterministic, platform-independent random streams.

The generator is SplitMix64 (Steele, Lea & Flood's published mixer): state
advances by a fixed odd gamma and each output is the finalizer of the new
state. Per-instance streams are derived as finalize(seed XOR index * GAMMA),
so stream q depends only on (seed, q) and never on the suite size.

Sampling uses draw-count-stable methods only: inverse CDF for the
exponential, a linear map for the uniform, and an explicit two-draw
Box-Muller for the gaussian (the second deviate is never cached). Callers
that need bounded values clamp rather than resample, keeping every stream's
draw count a pure function of the inputs.
"""

from __future__ import annotations

import math

from ejsp.model import DistSpec

PRNG_ID = "splitmix64"

MASK64 = 0xFFFFFFFFFFFFFFFF
GAMMA = 0x9E3779B97F4A7C15  # SplitMix64 golden gamma; also the index constant


def _mix(z: int) -> int:
    """SplitMix64 finalizer."""
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK64
    return z ^ (z >> 31)


class Stream:
    """Single-owner mutable PRNG state; move between threads, never share."""

    __slots__ = ("state",)

    prng_id = PRNG_ID

    def __init__(self, state: int):
        self.state = state & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return _mix(self.state)

    def next_unit(self) -> float:
        """Uniform in [0, 1): top 53 bits of the next output / 2^53."""
        return (self.next_u64() >> 11) * (2.0**-53)


def make_stream(seed: int, index: int) -> Stream:
    """Stream for instance `index` of a suite seeded with `seed`.

    The derivation mixes seed XOR index*GAMMA through the SplitMix64
    finalizer; distinct indices give practically independent streams, and the
    result does not depend on how many instances the suite has.
    """
    if seed < 0 or index < 0:
        raise ValueError("seed and index must be non-negative")
    return Stream(_mix((seed ^ (index * GAMMA & MASK64)) & MASK64))


def sample(stream: Stream, dist: DistSpec) -> float:
    """One draw from a fully resolved distribution spec."""
    if dist.kind == "exponential":
        if dist.lam is None:
            raise ValueError("exponential sample requires lambda")
        return -math.log(1.0 - stream.next_unit()) / dist.lam
    if dist.kind == "uniform":
        if dist.a is None or dist.b is None:
            raise ValueError("uniform sample requires a and b")
        return dist.a + stream.next_unit() * (dist.b - dist.a)
    if dist.kind == "gaussian":
        if dist.mu is None or dist.sigma is None:
            raise ValueError("gaussian sample requires mu and sigma")
        u1 = stream.next_unit()
        u2 = stream.next_unit()
        if u1 == 0.0:  # probability 2^-53; keeps log() in domain
            u1 = 2.0**-53
        z = math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
        return dist.mu + dist.sigma * z
    raise ValueError(f"unknown distribution kind {dist.kind!r}")


def sample_int_range(stream: Stream, lo: int, hi: int) -> int:
    """Integer uniform on [lo, hi], both ends inclusive."""
    if lo > hi:
        raise ValueError(f"empty range [{lo}, {hi}]")
    v = lo + math.floor(stream.next_unit() * (hi - lo + 1))
    return min(v, hi)
