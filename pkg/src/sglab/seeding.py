"""Deterministic RNG derivation.

Every random procedure in the package takes an explicit seed and derives
substreams through ``numpy.random.SeedSequence`` spawn keys, so results are
reproducible bit-for-bit and independent of any worker partitioning.
"""

from __future__ import annotations

import numpy as np


def spawn_rng(seed: int, *key: int) -> np.random.Generator:
    """Generator for substream ``key`` of master ``seed``.

    ``spawn_rng(s)`` and ``spawn_rng(s, i, j)`` are independent streams; the
    same arguments always produce the same stream.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))
