"""
Seed derivation and random generators.

Every replicate draws from its own Philox stream. The stream seed of
replicate i is the SplitMix64 finaliser applied to master + gamma (i + 1)
mod 2^64, with gamma the odd golden-ratio increment. Both steps are
bijections of 64-bit integers, so distinct replicate indices always get
distinct stream seeds.
"""

from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ...core.exceptions import ValidationError

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(z: int) -> int:
    """SplitMix64 output function of a 64-bit state."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def make_generator(seed: int) -> np.random.Generator:
    """
    Philox-backed generator keyed by a 64-bit seed.

    Philox is counter based, so a (seed, draw count) pair fixes the output
    on every platform.
    """
    if not 0 <= int(seed) <= MASK64:
        raise ValidationError(f"Seed must be a 64-bit unsigned integer, got {seed}", details={"seed": seed})
    return np.random.Generator(np.random.Philox(key=int(seed)))


class SeedPolicy(BaseModel):
    """
    Derivation of per-replicate stream seeds from one master seed.

    Attributes:
        master_seed (int): 64-bit master seed of the run
    """

    model_config = ConfigDict(frozen=True)

    master_seed: int = Field(ge=0, le=MASK64)

    def stream_seed(self, index: int) -> int:
        """
        Stream seed of replicate `index`.

        Args:
            index: Replicate index, 0 <= index < 2^64 - 1

        Returns:
            int: 64-bit seed; injective in `index`
        """
        if index < 0:
            raise ValidationError(f"Replicate index must be >= 0, got {index}", details={"index": index})
        return splitmix64(self.master_seed + GOLDEN_GAMMA * (index + 1))

    def generator(self, index: int) -> np.random.Generator:
        """Generator of replicate `index`."""
        return make_generator(self.stream_seed(index))
