"""Deterministic, platform-independent random streams.

Each stream is keyed by (seed, key); keys are usually cluster keys, so
draws for one entity never disturb draws for another no matter what order
clusters are processed in. Sub-seeds come from SHA-256 and the counter
stream is SplitMix64, both exactly reproducible across processes and
platforms.

Draw accounting is fixed per operation: one uniform per Laplace draw, two
uniforms per Gaussian draw (Box-Muller; the second output is discarded).
"""

from __future__ import annotations

import hashlib
import math

from .errors import InvalidParams

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class DeterministicStream:
    """Counter-based u64 stream with fixed-consumption distributions."""

    __slots__ = ("_state", "draws", "seed", "key")

    def __init__(self, seed: int, key: str = ""):
        if not 0 <= seed <= _MASK64:
            raise InvalidParams("seed must fit in an unsigned 64-bit integer")
        digest = hashlib.sha256(seed.to_bytes(8, "big") + key.encode("utf-8")).digest()
        self._state = int.from_bytes(digest[:8], "big")
        self.draws = 0
        self.seed = seed
        self.key = key

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        z ^= z >> 31
        self.draws += 1
        return z

    def uniform(self) -> float:
        """Uniform on the open interval (0, 1); never returns an endpoint."""
        return ((self.next_u64() >> 11) + 0.5) / (1 << 53)

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n), rejection-sampled to avoid modulo bias."""
        if n <= 0:
            raise InvalidParams("randint needs n > 0")
        limit = ((1 << 64) // n) * n
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def gauss(self) -> float:
        """Standard normal draw; consumes exactly two uniforms."""
        u1 = self.uniform()
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def laplace(self, scale: float) -> float:
        """Laplace(0, scale) via inverse CDF; consumes exactly one uniform."""
        if not scale > 0:
            raise InvalidParams("laplace scale must be > 0")
        centered = self.uniform() - 0.5
        return -scale * math.copysign(1.0, centered) * math.log1p(-2.0 * abs(centered))
