"""hypergraphs.seeding

Order-independent random numbers. Every draw is a pure function of the run
seed and a tuple of keys (edge index, resample round, ...), so the result of
a randomized construction does not depend on the order in which draws are
evaluated.
"""
import numpy as np

SEED_LIMIT = 2 ** 64


def validate_seed(seed):
    """Return the seed as an int, rejecting anything outside [0, 2^64)."""
    if seed is None:
        raise ValueError("a seed is required for randomized constructions")
    seed = int(seed)
    if not 0 <= seed < SEED_LIMIT:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def derived_uniform(seed, *keys):
    """A uniform draw in [0, 1) determined by (seed, *keys)."""
    return np.random.default_rng([seed, *keys]).random()


def derived_coin(seed, *keys):
    """A fair coin determined by (seed, *keys)."""
    return derived_uniform(seed, *keys) < 0.5

