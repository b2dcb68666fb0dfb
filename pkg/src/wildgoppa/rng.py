"""Seeded randomness.

Every random choice flows from one integer seed through numpy's Philox
counter-based bit generator.  Independent streams are keyed by string labels,
so adding a new consumer never shifts the draws of existing ones.
"""
from __future__ import annotations

import zlib

import numpy as np


def make_rng(seed: int, *labels) -> np.random.Generator:
    """Generator for the stream (seed, *labels)."""
    if seed is None:
        raise ValueError("a seed is required")
    key = [int(seed) & 0xFFFFFFFF, int(seed) >> 32]
    key += [zlib.crc32(str(label).encode()) for label in labels]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def child_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**63 - 1))
