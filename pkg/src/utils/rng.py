"""Reproducible random streams.

Every generator and surrogate draws from numpy's counter-based Philox
bit generator keyed directly by the user's 64-bit seed, so a (seed, call)
pair gives the same numbers on every platform numpy supports.
"""

from typing import Union

import numpy as np

from src.data_models.errors import InvalidParameter

RNG_ID = "numpy.random.Philox-4x64-10"

_U64 = 2**64

SeedLike = Union[int, np.random.Generator]


def validate_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < _U64:
        raise InvalidParameter(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def make_rng(seed: SeedLike) -> np.random.Generator:
    """Return a Philox generator for ``seed``; generators pass through untouched."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(key=validate_seed(seed)))


def derive_seed(base_seed: int, index: int) -> int:
    """Per-item seed for batch work: a plain counter offset, wrapped to 64 bits."""
    return (validate_seed(base_seed) + int(index)) % _U64
