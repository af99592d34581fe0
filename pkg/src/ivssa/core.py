"""Interval algebra: intervals, ordered pairs, pair matrices, and their norms.

Intermediate matrices in the pipeline hold *ordered pairs* (a, b) with no
ordering constraint; only at emission are pairs mapped back to valid
intervals through ``phi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np


class IvssaError(Exception):
    """Base class for all library errors."""


class InvalidValueError(IvssaError):
    """Non-finite input or interval endpoints out of order."""


class ShapeError(IvssaError):
    """Incompatible matrix or series dimensions."""


class ParameterError(IvssaError):
    """Parameter outside its valid range."""


class VerticalityError(IvssaError):
    """Recurrent forecasting is undefined: squared last-component norm >= 1."""


class DegenerateSpectrumError(IvssaError):
    """Residual series carries zero spectral power (perfect fit)."""


class CsvError(IvssaError):
    """Malformed dataset file; carries the offending 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


def _as_float_grid(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidValueError(f"{name} contains non-finite values")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Interval:
    """Closed real interval [lo, hi]; construction enforces lo <= hi."""

    lo: float
    hi: float

    def __post_init__(self):
        lo = float(self.lo)
        hi = float(self.hi)
        if not (np.isfinite(lo) and np.isfinite(hi)):
            raise InvalidValueError(f"interval endpoints must be finite, got [{lo}, {hi}]")
        if lo > hi:
            raise InvalidValueError(f"interval endpoints out of order: lo={lo} > hi={hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)


class OrderedPair(NamedTuple):
    """Unconstrained real pair; may have a > b (e.g. after a Minkowski difference)."""

    a: float
    b: float


def phi(x: float, y: float) -> Interval:
    """Map a pair onto the interval [min(x, y), max(x, y)]."""
    x = float(x)
    y = float(y)
    if not (np.isfinite(x) and np.isfinite(y)):
        raise InvalidValueError(f"phi requires finite inputs, got ({x}, {y})")
    return Interval(min(x, y), max(x, y)) if x > y else Interval(x, y)


def phi_arrays(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``phi``: elementwise (min, max) of two equal-shape arrays."""
    return np.minimum(x, y), np.maximum(x, y)


@dataclass(frozen=True)
class PairMatrix:
    """Dense matrix of ordered pairs, stored as two real grids of equal shape.

    ``a`` holds the first pair component, ``b`` the second.  Addition and
    subtraction are the pointwise Minkowski-type operations (componentwise,
    no reordering).
    """

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = _as_float_grid(self.a, "pair matrix a-grid")
        b = _as_float_grid(self.b, "pair matrix b-grid")
        if a.ndim != 2 or b.ndim != 2:
            raise ShapeError("pair matrix grids must be 2-dimensional")
        if a.shape != b.shape:
            raise ShapeError(f"pair component shapes differ: {a.shape} vs {b.shape}")
        if a.size == 0:
            raise ShapeError("pair matrix must be nonempty")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_pairs(cls, rows: Sequence[Sequence[tuple[float, float]]]) -> "PairMatrix":
        a = [[p[0] for p in row] for row in rows]
        b = [[p[1] for p in row] for row in rows]
        return cls(np.array(a, dtype=float), np.array(b, dtype=float))

    @property
    def n_rows(self) -> int:
        return self.a.shape[0]

    @property
    def n_cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    def entry(self, i: int, j: int) -> OrderedPair:
        """Pair at 0-based position (i, j)."""
        return OrderedPair(float(self.a[i, j]), float(self.b[i, j]))

    def __add__(self, other: "PairMatrix") -> "PairMatrix":
        return minkowski_add(self, other)

    def __sub__(self, other: "PairMatrix") -> "PairMatrix":
        return minkowski_sub(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PairMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and bool(np.array_equal(self.a, other.a))
            and bool(np.array_equal(self.b, other.b))
        )


def minkowski_add(x: PairMatrix, y: PairMatrix) -> PairMatrix:
    """Pointwise Minkowski sum: (a + c, b + d) on each entry."""
    if x.shape != y.shape:
        raise ShapeError(f"cannot add pair matrices of shapes {x.shape} and {y.shape}")
    return PairMatrix(x.a + y.a, x.b + y.b)


def minkowski_sub(x: PairMatrix, y: PairMatrix) -> PairMatrix:
    """Pointwise Minkowski difference: (a - c, b - d); result pairs may be unordered."""
    if x.shape != y.shape:
        raise ShapeError(f"cannot subtract pair matrices of shapes {x.shape} and {y.shape}")
    return PairMatrix(x.a - y.a, x.b - y.b)


def c_norm(y: PairMatrix) -> float:
    """Frobenius-type norm of a pair matrix: sqrt(sum(a^2 + b^2)) / sqrt(2).

    Coincides with the Frobenius norm when a == b everywhere.
    """
    total = float(np.sum(y.a * y.a) + np.sum(y.b * y.b))
    return float(np.sqrt(0.5 * total))


def hausdorff(x: Interval, y: Interval) -> float:
    """Hausdorff distance between two intervals: max endpoint deviation."""
    return max(abs(x.lo - y.lo), abs(x.hi - y.hi))


def is_hankel(y: PairMatrix, tol: float | None = None) -> bool:
    """True iff both pair components are constant (within tol) on each antidiagonal.

    ``tol=None`` uses 1e-9 relative to the matrix C-norm.
    """
    if tol is None:
        tol = 1e-9 * c_norm(y)
    if tol < 0:
        raise ParameterError(f"tolerance must be nonnegative, got {tol}")
    l, k = y.shape
    idx = (np.arange(l)[:, None] + np.arange(k)[None, :]).ravel()
    n_diag = l + k - 1
    for grid in (y.a, y.b):
        flat = grid.ravel()
        mins = np.full(n_diag, np.inf)
        maxs = np.full(n_diag, -np.inf)
        np.minimum.at(mins, idx, flat)
        np.maximum.at(maxs, idx, flat)
        if np.any(maxs - mins > tol):
            return False
    return True


@dataclass(frozen=True)
class IntervalSeries:
    """Time-indexed sequence of intervals, backed by lo/hi arrays.

    ``labels`` are opaque time labels; when present they match the series
    length.  Supports integer indexing (returns ``Interval``) and slicing
    (returns ``IntervalSeries``).
    """

    lo: np.ndarray
    hi: np.ndarray
    labels: tuple[str, ...] | None = field(default=None)

    def __post_init__(self):
        lo = _as_float_grid(self.lo, "series lo")
        hi = _as_float_grid(self.hi, "series hi")
        if lo.ndim != 1 or hi.ndim != 1:
            raise ShapeError("series endpoints must be 1-dimensional")
        if lo.shape != hi.shape:
            raise ShapeError(f"endpoint lengths differ: {lo.shape[0]} vs {hi.shape[0]}")
        if lo.size == 0:
            raise ShapeError("series must be nonempty")
        if np.any(lo > hi):
            t = int(np.argmax(lo > hi))
            raise InvalidValueError(
                f"series value at position {t} has lo={lo[t]} > hi={hi[t]}"
            )
        labels = self.labels
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != lo.size:
                raise ShapeError(
                    f"{len(labels)} labels for {lo.size} values"
                )
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_intervals(
        cls, values: Iterable[Interval], labels: Sequence[str] | None = None
    ) -> "IntervalSeries":
        vals = list(values)
        return cls(
            np.array([v.lo for v in vals], dtype=float),
            np.array([v.hi for v in vals], dtype=float),
            None if labels is None else tuple(labels),
        )

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[tuple[float, float]], labels: Sequence[str] | None = None
    ) -> "IntervalSeries":
        return cls.from_intervals((Interval(p[0], p[1]) for p in pairs), labels)

    def __len__(self) -> int:
        return int(self.lo.size)

    def __getitem__(self, item):
        if isinstance(item, slice):
            labels = None if self.labels is None else self.labels[item]
            return IntervalSeries(self.lo[item], self.hi[item], labels)
        return Interval(float(self.lo[item]), float(self.hi[item]))

    def __iter__(self):
        for lo, hi in zip(self.lo, self.hi):
            yield Interval(float(lo), float(hi))

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntervalSeries):
            return NotImplemented
        return (
            len(self) == len(other)
            and bool(np.array_equal(self.lo, other.lo))
            and bool(np.array_equal(self.hi, other.hi))
        )

    @property
    def widths(self) -> np.ndarray:
        return self.hi - self.lo

    @property
    def mids(self) -> np.ndarray:
        return 0.5 * (self.lo + self.hi)

    def is_degenerate(self, tol: float = 0.0) -> bool:
        """True when every value collapses to a point (lo == hi within tol)."""
        return bool(np.all(self.hi - self.lo <= tol))
