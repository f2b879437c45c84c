"""
Seed handling.

All randomness flows through numpy's Philox bit generator (counter-based,
64-bit) seeded with a ``SeedSequence``. A task is identified by the master
seed plus a path of small integers (stream id, grid point, partition, ...),
so results never depend on execution order or on the number of workers.
"""
import numpy as np

SEED_MASK = (1 << 64) - 1

# Stream ids, one per consumer of randomness.
STREAM_WHITE_NOISE = 1
STREAM_SINE_NOISE = 2
STREAM_LOGISTIC = 3
STREAM_LORENZ = 4
STREAM_MICROSTATES = 5
STREAM_SWEEP = 6


def make_rng(seed: int, *path: int) -> np.random.Generator:
    """Generator for the stream identified by ``(seed, *path)``."""
    sequence = np.random.SeedSequence(entropy=seed & SEED_MASK, spawn_key=tuple(path))
    return np.random.Generator(np.random.Philox(sequence))


def derive_seed(seed: int, *path: int) -> int:
    """Derive an independent 64-bit seed for a sub-task."""
    sequence = np.random.SeedSequence(entropy=seed & SEED_MASK, spawn_key=tuple(path))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])
