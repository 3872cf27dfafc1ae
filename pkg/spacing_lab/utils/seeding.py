"""
Deterministic per-replica random streams.

Each replica draws from a counter-based Philox generator whose key is derived
from (base seed, N, interval index, replica index), so results do not depend
on scheduling or thread count.
"""
from typing import Tuple

import numpy as np

SEED_MASK = 2 ** 64 - 1


def derive_seed(base_seed: int, *spawn_key: int) -> int:
    """64-bit seed for the stream identified by spawn_key under base_seed."""
    sequence = np.random.SeedSequence(int(base_seed), spawn_key=tuple(int(k) for k in spawn_key))
    return int(sequence.generate_state(1, dtype=np.uint64)[0]) & SEED_MASK


def generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))


def replica_key(n: int, interval_index: int, replica: int) -> Tuple[int, int, int]:
    return n, interval_index, replica
