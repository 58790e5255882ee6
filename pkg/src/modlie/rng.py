"""Seeded, splittable randomness.

Every randomized routine takes a seed (or a generator built here) so runs
are reproducible. Children are spawned from a ``SeedSequence`` and drive a
counter-based Philox generator, so independent streams never overlap.
"""
from __future__ import annotations

from typing import Union

import numpy as np

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator]


def make_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(int(seed))
    return np.random.Generator(np.random.Philox(ss))


def spawn(seed: Union[int, np.random.SeedSequence], k: int) -> list[np.random.Generator]:
    """``k`` independent child generators of ``seed``."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(int(seed))
    return [make_rng(child) for child in ss.spawn(k)]
