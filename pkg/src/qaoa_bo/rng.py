"""Deterministic named RNG substreams.

One root seed per run fans out into independent, order-insensitive streams
via ``SeedSequence`` spawn keys. Drawing from one stream never perturbs
another, so adding an evaluation in one place cannot shift random numbers
consumed elsewhere.
"""

from __future__ import annotations

import numpy as np

# Registry of substream ids. Append only; renumbering breaks reproducibility.
_STREAMS = {
    "init": 0,        # initial BO design points
    "estimator": 1,   # measurement noise / shot sampling
    "variance": 2,    # gradient-variance Monte Carlo
    "lipschitz": 3,   # Lipschitz pair sampling
    "shots": 4,       # shot-mode basis sampling
}


def substream(seed: int, name: str) -> np.random.Generator:
    """Return the named generator derived from ``seed``."""
    try:
        key = _STREAMS[name]
    except KeyError:
        raise KeyError(f"unknown RNG substream {name!r}; known: {sorted(_STREAMS)}") from None
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(key,)))


def as_generator(rng_or_seed) -> np.random.Generator:
    """Coerce an int seed or Generator into a Generator."""
    if isinstance(rng_or_seed, np.random.Generator):
        return rng_or_seed
    return np.random.default_rng(rng_or_seed)
