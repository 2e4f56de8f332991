"""
Seed handling for reproducible sweeps.

Every task owns a generator seeded from (master_seed, task_index) so results do
not depend on how tasks are scheduled across workers.
"""

from typing import Union

import numpy as np

SeedLike = Union[int, np.random.Generator]


def derive_seed(master_seed: int, task_index: int) -> int:
    """Deterministic 64-bit seed for one task of a sweep."""
    sequence = np.random.SeedSequence(entropy=master_seed, spawn_key=(task_index,))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def make_generator(seed: SeedLike) -> np.random.Generator:
    """PCG64 generator from an integer seed; generators pass through unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def task_generator(master_seed: int, task_index: int) -> np.random.Generator:
    return make_generator(derive_seed(master_seed, task_index))
