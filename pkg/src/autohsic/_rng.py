"""Deterministic RNG substreams keyed by integer tuples."""
from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def substream(master_seed: int, *key: int) -> np.random.Generator:
    """Independent generator for ``(master_seed, *key)``.

    ``SeedSequence`` hashes the entropy words, so distinct keys give
    statistically independent PCG64 streams and no state is shared.
    """
    words = [int(master_seed) & _MASK64] + [int(k) & _MASK64 for k in key]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(words)))


def derive_seed(master_seed: int, *key: int) -> int:
    """A 64-bit child seed, for handing a seed (not a generator) downstream."""
    words = [int(master_seed) & _MASK64] + [int(k) & _MASK64 for k in key]
    return int(np.random.SeedSequence(words).generate_state(1, np.uint64)[0])
