"""Seeded random streams and the four samplers the model draws from.

Generator: MT19937 from the standard library (``random.Random``), seeded with
an integer. Integer seeding of MT19937 is fixed by the CPython docs and does
not depend on platform or ``PYTHONHASHSEED``.

Substreams: a stream named ``name`` under master seed ``s`` is seeded with the
first 8 bytes (big-endian) of ``sha256(f"{s}/{name}")``. The model uses the
names ``arrivals``, ``sizes``, ``durations/<project id>`` and
``failures/<project id>``, so every project keeps its own duration and
failure draws whatever the pool capacities are.

Draw accounting, per call:

* ``uniform``, ``exp_sample``, ``size_sample``, ``bernoulli``: one 53-bit draw.
* ``uniform_int``: one 64-bit draw. A second draw happens only on the
  rejection branch of Lemire's method, with probability below
  ``range / 2**64``.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass

from .kernel import ContractViolation

SIZES = ("small", "medium", "large")

_TWO_POW_64 = 1 << 64
_MASK_64 = _TWO_POW_64 - 1


def derive_seed(master_seed: int, name: str) -> int:
    digest = hashlib.sha256(f"{master_seed}/{name}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


class RngStream:
    """One reproducible stream of uniform draws."""

    def __init__(self, seed: int) -> None:
        if not isinstance(seed, int) or not 0 <= seed < _TWO_POW_64:
            raise ContractViolation(f"seed must be an unsigned 64-bit integer, got {seed!r}")
        self.seed = seed
        self._gen = random.Random(seed)

    @classmethod
    def substream(cls, master_seed: int, name: str) -> "RngStream":
        return cls(derive_seed(master_seed, name))

    def uniform(self) -> float:
        """Uniform double in [0, 1) on the 2**-53 grid."""
        return self._gen.getrandbits(53) * 2.0**-53

    def raw64(self) -> int:
        return self._gen.getrandbits(64)


@dataclass(frozen=True)
class SizeDistribution:
    p_small: float = 0.48
    p_medium: float = 0.25
    p_large: float = 0.27

    def errors(self) -> list[str]:
        problems = []
        for name, p in zip(SIZES, self.as_tuple()):
            if not (isinstance(p, (int, float)) and 0.0 <= p <= 1.0):
                problems.append(f"p_{name} must lie in [0, 1], got {p!r}")
        if not problems and abs(sum(self.as_tuple()) - 1.0) > 1e-9:
            problems.append(f"probabilities must sum to 1, got {sum(self.as_tuple())!r}")
        return problems

    def validate(self) -> None:
        problems = self.errors()
        if problems:
            raise ContractViolation("; ".join(problems))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.p_small, self.p_medium, self.p_large)


def exp_inverse_cdf(u: float, mean: float) -> float:
    # Written so that u == 0 gives +0.0, not -0.0.
    return mean * -math.log1p(-u)


def exp_sample(rng: RngStream, mean: float) -> float:
    """Exponential draw with the given mean by inversion."""
    if not mean > 0:
        raise ContractViolation(f"exponential mean must be positive, got {mean!r}")
    return exp_inverse_cdf(rng.uniform(), mean)


def size_from_uniform(u: float, dist: SizeDistribution) -> str:
    if u < dist.p_small:
        return "small"
    if u < dist.p_small + dist.p_medium:
        return "medium"
    return "large"


def size_sample(rng: RngStream, dist: SizeDistribution) -> str:
    dist.validate()
    return size_from_uniform(rng.uniform(), dist)


def uniform_int(rng: RngStream, lo: int, hi: int) -> int:
    """Integer uniform on ``{lo, ..., hi}`` by Lemire's multiply-and-reject."""
    if lo > hi:
        raise ContractViolation(f"empty integer range [{lo}, {hi}]")
    n = hi - lo + 1
    m = rng.raw64() * n
    low = m & _MASK_64
    if low < n:
        threshold = (_TWO_POW_64 - n) % n
        while low < threshold:
            m = rng.raw64() * n
            low = m & _MASK_64
    return lo + (m >> 64)


def bernoulli(rng: RngStream, p: float) -> bool:
    if not 0.0 <= p <= 1.0:
        raise ContractViolation(f"probability must lie in [0, 1], got {p!r}")
    return rng.uniform() < p
