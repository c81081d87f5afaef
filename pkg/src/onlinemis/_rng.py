"""Seed handling.

A seed is either a plain ``int`` or a tuple of ints ``(root, i, j, ...)``
naming a position in a tree of streams.  Named sub-streams are derived by
appending a stable hash of the name, so the draws made for one purpose
never shift the draws made for another.
"""
from __future__ import annotations

import zlib
from typing import Sequence, Union

import numpy as np

Seed = Union[int, Sequence[int]]


def _split(seed: Seed) -> tuple[int, tuple[int, ...]]:
    if isinstance(seed, (int, np.integer)):
        return int(seed), ()
    seed = tuple(int(s) for s in seed)
    if not seed:
        raise ValueError("empty seed tuple")
    return seed[0], seed[1:]


def child_seed(seed: Seed, *keys: int | str) -> tuple[int, ...]:
    root, path = _split(seed)
    extra = tuple(k if isinstance(k, (int, np.integer)) else zlib.crc32(k.encode()) for k in keys)
    return (root,) + path + tuple(int(k) for k in extra)


def named_rng(seed: Seed, name: str) -> np.random.Generator:
    """Independent generator for stream ``name`` under ``seed``."""
    root, path = _split(child_seed(seed, name))
    return np.random.default_rng(np.random.SeedSequence(entropy=root, spawn_key=path))


def as_rng(seed: Seed | np.random.Generator, name: str = "default") -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return named_rng(seed, name)
