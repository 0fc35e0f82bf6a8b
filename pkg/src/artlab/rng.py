"""Deterministic random-stream derivation.

Every stochastic component draws from its own named stream derived from the
master seed, so adding a new consumer never perturbs existing ones.
"""

import numpy as np

# Fixed label -> spawn-key table. Append only; never renumber.
_STREAMS = {
    "split": 0,
    "init": 1,
    "shuffle": 2,
    "resample": 3,
    "imbalance": 4,
    "method": 5,
}


def stream(seed: int, label: str) -> np.random.Generator:
    """Return the generator for (master seed, stream label)."""
    try:
        key = _STREAMS[label]
    except KeyError:
        raise ValueError(f"unknown rng stream label: {label!r}") from None
    return np.random.Generator(np.random.SFC64(np.random.SeedSequence(seed, spawn_key=(key,))))
