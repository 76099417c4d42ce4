"""Named seed derivation.

Every random draw in the package comes from a generator derived from one
master seed plus a path of names/indices, e.g. ``derive_rng(seed, "embed",
"subset", 7)``.  Two components that use different paths never share a
stream, and each component can be replayed in isolation.
"""
from __future__ import annotations

import zlib

import numpy as np

SEED_MASK = (1 << 64) - 1


def _key(part: int | str) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode("utf-8"))
    if part < 0:
        raise ValueError("seed path indices must be non-negative")
    return int(part)


def derive_rng(seed: int, *path: int | str) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed) & SEED_MASK, spawn_key=tuple(_key(p) for p in path))
    return np.random.Generator(np.random.PCG64(ss))


def derive_seed(seed: int, *path: int | str) -> int:
    """A 64-bit child seed, for handing to code that wants a plain integer."""
    return int(derive_rng(seed, *path).integers(0, 2**63 - 1, dtype=np.int64))
