"""Deterministic random streams.

Every random object is drawn from its own generator derived from
``(master seed, purpose label, counter)`` so results do not depend on the
order in which objects are created or on which worker creates them.
"""
from __future__ import annotations

import secrets
import zlib

import numpy as np


def fresh_seed() -> int:
    """A 64-bit seed from the OS entropy pool."""
    return secrets.randbits(64)


def derive_rng(seed: int, label: str = "", index: int = 0) -> np.random.Generator:
    tag = zlib.crc32(label.encode("utf-8"))
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(tag, int(index)))
    return np.random.Generator(np.random.PCG64(ss))


def child_seed(rng: np.random.Generator) -> int:
    """Draw a 64-bit seed from ``rng`` for a sub-computation."""
    return int(rng.integers(0, 2**63, dtype=np.int64))
