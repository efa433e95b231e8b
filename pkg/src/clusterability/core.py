"""Shared primitive types and the deterministic randomness contract.

Every stochastic routine in this package (bootstrap p-values, synthetic
data generators) consumes a :class:`RandomSeed` and derives per-replicate
substreams from it, so results are reproducible bit for bit no matter how
the work is scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["RandomSeed", "Significance", "derive_substream", "stream_from"]

_U64_MAX = 2**64 - 1


@dataclass(frozen=True)
class RandomSeed:
    """A 64-bit unsigned seed identifying a reproducible random stream."""

    value: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.value, (int, np.integer)):
            raise TypeError(f"seed value must be an integer, got {type(self.value).__name__}")
        if not 0 <= int(self.value) <= _U64_MAX:
            raise ValueError(f"seed value must be in [0, 2**64), got {self.value}")
        object.__setattr__(self, "value", int(self.value))


@dataclass(frozen=True)
class Significance:
    """Significance level for the clusterable / unclusterable decision."""

    alpha: float = 0.05

    def __post_init__(self) -> None:
        alpha = float(self.alpha)
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"alpha must lie strictly between 0 and 1, got {self.alpha}")
        object.__setattr__(self, "alpha", alpha)


def derive_substream(seed: RandomSeed, index: int) -> RandomSeed:
    """Derive the ``index``-th substream seed of ``seed``.

    Pure function of ``(seed, index)``: replicate ``i`` of any bootstrap
    always consumes substream ``i`` regardless of evaluation order, which
    is what makes parallel runs byte-identical to serial ones.  Distinct
    indices give statistically independent streams (SeedSequence spawn
    keys).
    """
    if index < 0:
        raise ValueError(f"substream index must be nonnegative, got {index}")
    ss = np.random.SeedSequence(seed.value, spawn_key=(int(index),))
    return RandomSeed(int(ss.generate_state(1, np.uint64)[0]))


def stream_from(seed: RandomSeed) -> np.random.Generator:
    """A fresh PCG64 generator for ``seed``.  Single-consumer."""
    return np.random.Generator(np.random.PCG64(seed.value))
