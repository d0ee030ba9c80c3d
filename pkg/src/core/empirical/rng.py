"""
Random Streams

Counter-based Philox generators keyed by (seed, stream name), so every
stage of a trial draws from its own reproducible stream regardless of
how many variates the other stages consume.
"""

import numpy as np

STREAMS = {
    "teachers": 0,
    "source": 1,
    "target": 2,
    "mask": 3,
    "spectrum": 4,
    "test": 5,
}

SEED_MODULUS = 2**64


def stream(seed: int, name: str) -> np.random.Generator:
    if name not in STREAMS:
        raise ValueError(f"Unknown stream: {name}. Available: {list(STREAMS)}")
    if not 0 <= seed < SEED_MODULUS:
        raise ValueError("seed must be an unsigned 64-bit integer")
    sequence = np.random.SeedSequence(seed, spawn_key=(STREAMS[name],))
    return np.random.Generator(np.random.Philox(sequence))


def trial_seed(master_seed: int, index: int) -> int:
    return (master_seed + index) % SEED_MODULUS
