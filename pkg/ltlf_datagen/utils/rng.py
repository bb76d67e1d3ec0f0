"""
Random stream derivation.

Every random decision of a run draws from a numpy Generator derived from the
task seed and a key path (split, index, purpose), so results do not depend
on the order in which workers pick up jobs.
"""

import numpy as np

WALK = 0
SOLUTION = 1
IMAGE = 2
CUBE = 3


def derive_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for the given key path under seed."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key)))


def uniform_choice(rng: np.random.Generator, items):
    """One element of a non-empty sequence, uniformly."""
    return items[int(rng.integers(len(items)))]


def shuffled(rng: np.random.Generator, items) -> list:
    """A uniformly permuted copy of items."""
    order = rng.permutation(len(items))
    return [items[i] for i in order]
