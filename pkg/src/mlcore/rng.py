"""Deterministic random number generation.

Every randomized operation in the library takes an explicit 64-bit seed and
derives its own counter-based generator from it. There is no global RNG
state anywhere: two calls with the same seed produce the same stream, and
independent subsystems draw from independent streams keyed by a label.
"""

import numpy as np

# Stable label -> stream-id mapping. New consumers append; never renumber.
_STREAMS = {
    "kfold": 1,
    "montecarlo": 2,
    "kmeans": 3,
    "permutation": 4,
    "workflow": 5,
}


def make_rng(seed, stream=None):
    """Return a Philox-backed Generator for ``seed`` and an optional stream label.

    The same (seed, stream) pair always yields the same stream; distinct
    streams are statistically independent.
    """
    key = () if stream is None else (_STREAMS[stream],)
    ss = np.random.SeedSequence(int(seed), spawn_key=key)
    return np.random.Generator(np.random.Philox(ss))
