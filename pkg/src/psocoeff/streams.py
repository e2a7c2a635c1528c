"""Seeded random streams.

Every consumer of randomness gets its own counter-based (Philox) stream keyed
by the master seed and a (purpose, index) pair, so the values a particle sees
do not depend on the order in which other particles are processed.
"""

from __future__ import annotations

import numpy as np

INIT = 0
TOPOLOGY = 1
PARTICLE = 2


def stream(seed: int, purpose: int, index: int = 0) -> np.random.Generator:
    if seed < 0:
        raise ValueError(f"seed must be unsigned, got {seed}")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(purpose, index))
    return np.random.Generator(np.random.Philox(ss))


def particle_streams(seed: int, n: int) -> list[np.random.Generator]:
    return [stream(seed, PARTICLE, i) for i in range(n)]
