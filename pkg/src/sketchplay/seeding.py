"""Counter-keyed random streams.

Every random draw in the package comes from a stream identified by
(seed, stream name, *indices). Streams are independent PCG64 generators
derived through numpy's SeedSequence, so results do not depend on call
order, parallel scheduling, or any hidden global state, and resuming a
run needs no RNG state in the checkpoint.
"""

from __future__ import annotations

import numpy as np

# Fixed stream-name registry; append only, never renumber.
_STREAMS = {
    "synth": 1,
    "split": 2,
    "shuffle": 3,
    "noise": 4,
    "gp": 5,
    "eval": 6,
    "init": 7,
    "simulate": 8,
    "test": 9,
}


def stream(seed: int, name: str, *indices: int) -> np.random.Generator:
    """Return the generator for stream `name` with the given counters."""
    try:
        key = _STREAMS[name]
    except KeyError:
        raise KeyError(f"unregistered random stream {name!r}") from None
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(key, *map(int, indices)))
    return np.random.Generator(np.random.PCG64(ss))
