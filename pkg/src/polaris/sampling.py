"""Seeded, counter-based random generation shared by all probabilistic checks."""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator keyed by (seed, stream); same key, same draws anywhere."""
    key = ((int(seed) & _MASK) << 64) | (int(stream) & _MASK)
    return np.random.Generator(np.random.Philox(key=key))


def random_points(rng: np.random.Generator, count: int, nvars: int, p: int) -> np.ndarray:
    """``count`` uniformly random nonzero vectors in F_p^nvars."""
    out = rng.integers(0, p, size=(count, nvars), dtype=np.int64)
    zero = ~out.any(axis=1)
    while zero.any():
        out[zero] = rng.integers(0, p, size=(int(zero.sum()), nvars), dtype=np.int64)
        zero = ~out.any(axis=1)
    return out


def small_nonzero(rng: np.random.Generator, size, bound: int = 5) -> np.ndarray:
    """Integers uniform in {-bound..bound} minus {0}."""
    v = rng.integers(1, bound + 1, size=size, dtype=np.int64)
    s = rng.integers(0, 2, size=size, dtype=np.int64) * 2 - 1
    return v * s
