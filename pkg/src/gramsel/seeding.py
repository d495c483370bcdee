"""Deterministic seed derivation for reproducible ensembles.

Per-instance and per-sample seeds are derived from a master seed and an
integer key path through ``numpy.random.SeedSequence``, so results are
independent of scheduling and worker counts.
"""

import numpy as np


def seed_sequence(master, *key):
    parts = [int(master), *(int(k) for k in key)]
    if any(p < 0 for p in parts):
        raise ValueError(f"seeds and key parts must be non-negative, got {parts}")
    return np.random.SeedSequence(parts)


def derive_seed(master, *key):
    """Stable non-negative integer seed derived from (master, *key)."""
    return int(seed_sequence(master, *key).generate_state(1, np.uint64)[0])


def rng_for(master, *key):
    """Fresh ``numpy.random.Generator`` for the given key path."""
    return np.random.default_rng(seed_sequence(master, *key))
