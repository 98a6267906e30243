"""Deterministic RNG stream derivation from one master seed.

Each run consumes four labeled sub-streams (topology build, initial
weights, initial strategies, step dynamics).  Derived seeds for replicas
and sweep grid points live in a separate spawn-key namespace so they can
never collide with the stream labels.
"""

from __future__ import annotations

import numpy as np

STREAM_TOPOLOGY = 0
STREAM_INIT_WEIGHTS = 1
STREAM_INIT_STRATEGIES = 2
STREAM_DYNAMICS = 3

_DERIVE_NAMESPACE = 0x5EED


def stream(seed: int, label: int) -> np.random.Generator:
    """Generator for one labeled sub-stream of a master seed."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(label,)))


def derive_seed(seed: int, *indices: int) -> int:
    """64-bit child seed for (seed, indices), e.g. replica or grid point."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(_DERIVE_NAMESPACE, *indices))
    return int(ss.generate_state(1, np.uint64)[0])
