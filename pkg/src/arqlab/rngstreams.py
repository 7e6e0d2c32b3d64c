"""Counter-based random streams for reproducible, order-independent Monte Carlo.

Every consumer of randomness derives its own Philox stream from
``(master seed, *key)`` where the key encodes frame/batch index and a purpose
tag.  Streams are therefore identical no matter how trials are scheduled
across workers.
"""

import numpy as np

# purpose tags (keep stable: they are part of the reproducibility contract)
CHANNEL = 0
NOISE = 1
MESSAGE = 2
OUTAGE = 3
MISC = 7


def make_stream(seed, *key):
    """Return a ``numpy.random.Generator`` for the given master seed and key."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))
