"""Seeded sampling and deterministic fan-out helpers.

Every operation that consumes randomness derives one child seed per work
item from the master seed, so results are identical no matter how the items
are distributed over workers.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np


def spawn_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """One independent generator per work item, derived from ``seed``."""
    return [np.random.default_rng(s) for s in
            np.random.SeedSequence(seed).spawn(count)]


def unit_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniformly random unit vector in C^n (Euclidean norm 1)."""
    while True:
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        norm = np.linalg.norm(v)
        if norm > 1e-12:
            return v / norm


def unit_real_vector(rng: np.random.Generator, m: int) -> np.ndarray:
    while True:
        v = rng.standard_normal(m)
        norm = np.linalg.norm(v)
        if norm > 1e-12:
            return v / norm


def disc_point(rng: np.random.Generator, radius: float = 1.0) -> complex:
    """Uniform sample from the closed complex disc of the given radius."""
    r = radius * np.sqrt(rng.uniform())
    return r * np.exp(2j * np.pi * rng.uniform())


def deterministic_map(fn, items, workers: int = 1) -> list:
    """Map preserving order; results are independent of the worker count."""
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
