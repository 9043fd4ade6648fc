"""
Seed handling for reproducible sampling.

All randomness flows through numpy ``SeedSequence`` objects. A master seed is
an int; replicate ``r`` of a run always draws from
``SeedSequence(master, spawn_key=(r,))``, so the stream a replicate sees does
not depend on how replicates are split across workers.
"""

from typing import Optional, Union

import numpy as np

SeedLike = Union[int, np.random.SeedSequence]


def resolve_seed(seed: Optional[int]) -> int:
    """Return ``seed`` unchanged, or fresh OS entropy when it is None."""
    if seed is not None:
        if seed < 0:
            raise ValueError(f'seed must be non-negative, got {seed}')
        return int(seed)
    return int(np.random.SeedSequence().entropy)


def make_rng(seed: SeedLike) -> np.random.Generator:
    """Build a PCG64 generator from an int seed or a SeedSequence."""
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def replicate_seed(seed: int, replicate: int) -> np.random.SeedSequence:
    """Child seed for one replicate: ``SeedSequence(seed, spawn_key=(replicate,))``."""
    return np.random.SeedSequence(int(seed), spawn_key=(int(replicate),))


def replicate_rng(seed: int, replicate: int) -> np.random.Generator:
    """Generator for replicate ``replicate`` of a run seeded with ``seed``."""
    return make_rng(replicate_seed(seed, replicate))
