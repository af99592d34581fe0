"""Shared random-data builders for the test suite."""

from __future__ import annotations

import numpy as np

from ivssa import IntervalSeries, PairMatrix


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_series(rng: np.random.Generator, n: int, scale: float = 1.0) -> IntervalSeries:
    """Non-degenerate interval series with varied centers and widths."""
    mid = scale * rng.standard_normal(n) + rng.uniform(-3, 3)
    width = rng.uniform(0.05, 2.0, size=n) * scale
    return IntervalSeries(mid - width / 2, mid + width / 2)


def random_degenerate_series(rng: np.random.Generator, n: int) -> IntervalSeries:
    vals = rng.standard_normal(n) + rng.uniform(-2, 2)
    return IntervalSeries(vals, vals.copy())


def random_pair_matrix(rng: np.random.Generator, l: int, k: int) -> PairMatrix:
    return PairMatrix(rng.standard_normal((l, k)), rng.standard_normal((l, k)))


def structured_series(n: int, seed: int = 0, noise: float = 0.1) -> IntervalSeries:
    """Trend plus seasonal cycle with noisy endpoints; lo < hi throughout."""
    rng = make_rng(seed)
    t = np.arange(1, n + 1)
    mid = 10 + 0.05 * t + np.sin(2 * np.pi * t / 12)
    lo = mid - 1 + noise * rng.standard_normal(n)
    hi = mid + 1 + noise * rng.standard_normal(n)
    return IntervalSeries(np.minimum(lo, hi), np.maximum(lo, hi))
