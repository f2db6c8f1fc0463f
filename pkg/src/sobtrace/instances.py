"""Seeded random data sets shared by the verification command and tests."""

from __future__ import annotations

import numpy as np

from .polycore import SampleSet


def rng_for(seed: int, *path: int) -> np.random.Generator:
    """Independent generator per (seed, cell, instance) path."""
    return np.random.default_rng(np.random.SeedSequence([seed, *path]))


def random_samples(rng: np.random.Generator, n: int, log_gap=(-1.5, 1.5),
                   value_scale: float = 1.0) -> SampleSet:
    gaps = np.exp(rng.uniform(*log_gap, size=max(n - 1, 0)))
    xs = rng.uniform(-5.0, 5.0) + np.concatenate([[0.0], np.cumsum(gaps)])
    ys = value_scale * rng.normal(size=n)
    return SampleSet(xs, ys)
