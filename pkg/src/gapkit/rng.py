"""Seeded counter-based random streams.

Every stochastic routine in the package draws from a ``numpy`` Generator
backed by Philox (counter-based), so independent substreams can be derived
by name from a single root seed.  Nested algorithms derive children with
``Generator.spawn``; trials in validation sweeps use ``substream(seed, i)``
so trial i is reproducible in isolation.
"""

from __future__ import annotations

import os

import numpy as np

ENV_SEED = "GAPKIT_SEED"


def substream(seed: int, *path: int) -> np.random.Generator:
    """Generator for the child stream of ``seed`` addressed by ``path``."""
    ss = np.random.SeedSequence(seed, spawn_key=tuple(path))
    return np.random.Generator(np.random.Philox(ss))


def as_generator(rng) -> np.random.Generator:
    """Normalize ``rng``: pass Generators through, treat ints as root seeds.

    ``None`` falls back to the GAPKIT_SEED environment variable, then to
    fresh OS entropy.
    """
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        env = os.environ.get(ENV_SEED)
        if env is not None:
            return substream(int(env))
        return np.random.Generator(np.random.Philox())
    return substream(int(rng))
