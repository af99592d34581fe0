"""Grouping, diagonal averaging, and interval trendline extraction.

Diagonal averaging happens at the pair level (where it is the C-norm-closest
Hankel projection); pairs are mapped to intervals through ``phi`` only when a
series is emitted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    IntervalSeries,
    PairMatrix,
    ParameterError,
    phi_arrays,
)
from .decomposition import Decomposition
from .embedding import StackingMode


@dataclass(frozen=True)
class Grouping:
    """Set of retained component indices (1-based, duplicate-free)."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if len(idx) == 0:
            raise ParameterError("grouping must retain at least one component")
        if len(set(idx)) != len(idx):
            raise ParameterError(f"grouping has duplicate indices: {idx}")
        if min(idx) < 1:
            raise ParameterError(f"component indices are 1-based, got {min(idx)}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def leading(cls, m: int) -> "Grouping":
        """The prefix grouping {1, ..., m}."""
        if m < 1:
            raise ParameterError(f"leading grouping needs m >= 1, got {m}")
        return cls(tuple(range(1, m + 1)))

    def __len__(self) -> int:
        return len(self.indices)

    def validate(self, d: int) -> None:
        if max(self.indices) > d:
            raise ParameterError(
                f"grouping index {max(self.indices)} exceeds rank d={d}"
            )


def group(elementary: Sequence[PairMatrix], grouping: Grouping) -> PairMatrix:
    """Minkowski sum of the selected elementary matrices."""
    grouping.validate(len(elementary))
    total = elementary[grouping.indices[0] - 1]
    for i in grouping.indices[1:]:
        total = total + elementary[i - 1]
    return total


def _antidiagonal_means(grid: np.ndarray) -> np.ndarray:
    l, k = grid.shape
    n = l + k - 1
    idx = (np.arange(l)[:, None] + np.arange(k)[None, :]).ravel()
    sums = np.bincount(idx, weights=grid.ravel(), minlength=n)
    counts = np.bincount(idx, minlength=n)
    return sums / counts


def hankelize_pairs(y: PairMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Antidiagonal means of both component grids (pair series, no reordering)."""
    return _antidiagonal_means(y.a), _antidiagonal_means(y.b)


def hankelize(y: PairMatrix) -> PairMatrix:
    """C-norm-closest Hankel matrix of ordered pairs: antidiagonal means."""
    ga, gb = hankelize_pairs(y)
    l, k = y.shape
    idx = np.arange(l)[:, None] + np.arange(k)[None, :]
    return PairMatrix(ga[idx], gb[idx])


def diagonal_average(y: PairMatrix) -> IntervalSeries:
    """Collapse a pair matrix to an interval series of length l + k - 1.

    Averages each antidiagonal per component, then restores interval order
    through phi.
    """
    ga, gb = hankelize_pairs(y)
    lo, hi = phi_arrays(ga, gb)
    return IntervalSeries(lo, hi)


def extract_series(
    y_grouped: PairMatrix, dec: Decomposition, series_index: int
) -> PairMatrix:
    """Per-series block of a grouped matrix: rows for vertical stacking, columns for horizontal."""
    if not 1 <= series_index <= dec.n_series:
        raise ParameterError(
            f"series index must lie in [1, {dec.n_series}], got {series_index}"
        )
    s = series_index - 1
    if dec.mode is StackingMode.VERTICAL:
        l = dec.window
        return PairMatrix(
            y_grouped.a[s * l : (s + 1) * l], y_grouped.b[s * l : (s + 1) * l]
        )
    if dec.mode is StackingMode.HORIZONTAL:
        k = dec.k
        return PairMatrix(
            y_grouped.a[:, s * k : (s + 1) * k], y_grouped.b[:, s * k : (s + 1) * k]
        )
    return y_grouped


def _series_block(arr: np.ndarray, dec: Decomposition, s: int) -> np.ndarray:
    if dec.mode is StackingMode.VERTICAL:
        l = dec.window
        return arr[s * l : (s + 1) * l]
    if dec.mode is StackingMode.HORIZONTAL:
        k = dec.k
        return arr[:, s * k : (s + 1) * k]
    return arr


def _trendline_for(
    dec: Decomposition, grouping: Grouping, series_index: int
) -> tuple[np.ndarray, np.ndarray]:
    """Pre-phi pair series of one series' grouped reconstruction."""
    grouping.validate(dec.d)
    ga, gb = dec.grouped_arrays(grouping.indices)
    s = series_index - 1
    return (
        _antidiagonal_means(_series_block(ga, dec, s)),
        _antidiagonal_means(_series_block(gb, dec, s)),
    )


def trendline(
    dec: Decomposition, groupings: Sequence[Grouping] | Grouping
) -> list[IntervalSeries]:
    """Interval trendline per series; one grouping per series (a single
    grouping is applied to every series)."""
    if isinstance(groupings, Grouping):
        groupings = [groupings] * dec.n_series
    if len(groupings) != dec.n_series:
        raise ParameterError(
            f"expected {dec.n_series} groupings, got {len(groupings)}"
        )
    out = []
    for s, g in enumerate(groupings, start=1):
        ga, gb = _trendline_for(dec, g, s)
        lo, hi = phi_arrays(ga, gb)
        out.append(IntervalSeries(lo, hi))
    return out


@dataclass(frozen=True)
class ErcSet:
    """Elementary reconstructed components.

    ``components[i][s]`` is the interval series of component i+1 for series
    s+1; ``pairs[i][s]`` keeps the pre-phi endpoint channels (a, b), whose
    componentwise sums are exactly additive.
    """

    components: tuple[tuple[IntervalSeries, ...], ...]
    pairs: tuple[tuple[tuple[np.ndarray, np.ndarray], ...], ...]
    source: Decomposition

    @property
    def count(self) -> int:
        return len(self.components)

    def series(self, series_index: int = 1) -> tuple[IntervalSeries, ...]:
        """All ERCs of one 1-based series, in component order."""
        if not 1 <= series_index <= self.source.n_series:
            raise ParameterError(
                f"series index must lie in [1, {self.source.n_series}], got {series_index}"
            )
        return tuple(c[series_index - 1] for c in self.components)


def reconstruct_ercs(dec: Decomposition, count: int) -> ErcSet:
    """Diagonal-average each of the first ``count`` elementary matrices,
    per series for stacked decompositions."""
    if not 1 <= count <= dec.d:
        raise ParameterError(f"count must lie in [1, {dec.d}], got {count}")
    comps = []
    pairs = []
    for i in range(1, count + 1):
        ga_full, gb_full = dec.grouped_arrays((i,))
        per_series = []
        per_pairs = []
        for s in range(dec.n_series):
            ga = _antidiagonal_means(_series_block(ga_full, dec, s))
            gb = _antidiagonal_means(_series_block(gb_full, dec, s))
            lo, hi = phi_arrays(ga, gb)
            per_series.append(IntervalSeries(lo, hi))
            ga.flags.writeable = False
            gb.flags.writeable = False
            per_pairs.append((ga, gb))
        comps.append(tuple(per_series))
        pairs.append(tuple(per_pairs))
    return ErcSet(components=tuple(comps), pairs=tuple(pairs), source=dec)
