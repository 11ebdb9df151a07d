"""
Seeded random streams for reproducible experiments

All streams are derived from the experiment seed:

* ``sequence_generator`` / ``bootstrap_generator`` return numpy Generators
  seeded by a SeedSequence over (seed, stream, *keys). One is created per
  random sequence or bootstrap resample.
* ``shot_uniforms`` runs a Philox counter generator keyed by
  (seed, stream, *keys). Shot i starts at a fixed counter offset, so any
  block of shots sees the same draws as a full serial run.
"""
import math
from typing import Sequence

import numpy as np
from scipy.special import ndtri

MASK64 = (1 << 64) - 1

STREAM_SEQUENCE = 0
STREAM_SHOT = 1
STREAM_BOOTSTRAP = 2

# Philox emits four 64-bit words per counter step
_WORDS_PER_STEP = 4


def philox_key(seed: int, keys: Sequence[int]) -> np.ndarray:
    """128-bit Philox key for one stream"""
    entropy = [seed & MASK64, *[int(k) & MASK64 for k in keys]]
    return np.random.SeedSequence(entropy).generate_state(2, dtype=np.uint64)


def shot_uniforms(seed: int, keys: Sequence[int], count: int, n_draws: int,
                  start: int = 0) -> np.ndarray:
    """
    Uniform draws in the open interval (0, 1) for a block of shots

    Args:
        seed: Experiment seed (64-bit)
        keys: Stream coordinates, e.g. (STREAM_SHOT, N, k, salt)
        count: Number of shots
        n_draws: Draws per shot
        start: Index of the first shot in the block

    Returns:
        Array of shape (count, n_draws)
    """
    steps = math.ceil(n_draws / _WORDS_PER_STEP)
    width = steps * _WORDS_PER_STEP
    bit_generator = np.random.Philox(key=philox_key(seed, keys), counter=steps * int(start))
    u = np.random.Generator(bit_generator).random((int(count), width))[:, :n_draws]
    # keep the normal transform finite
    return np.clip(u, np.finfo(float).tiny, 1.0 - np.finfo(float).eps)


def uniforms_to_normals(u: np.ndarray) -> np.ndarray:
    """Standard normal draws from uniforms via the inverse normal CDF"""
    return ndtri(u)


def sequence_generator(seed: int, *keys: int) -> np.random.Generator:
    """Generator for one random sequence"""
    return np.random.default_rng(
        np.random.SeedSequence([seed & MASK64, STREAM_SEQUENCE, *[int(k) for k in keys]])
    )


def bootstrap_generator(seed: int, resample: int) -> np.random.Generator:
    """Generator for one bootstrap resample"""
    return np.random.default_rng(
        np.random.SeedSequence([seed & MASK64, STREAM_BOOTSTRAP, int(resample)])
    )
