"""Symbolic covariance, its eigendecomposition, and elementary pair matrices.

The covariance of two pair matrices weighs the endpoint cross-products
2:1:1:2 (the symbolic-data covariance, kept up to its printed constant);
its eigenbasis decomposes the trajectory matrix into rank-one pair
matrices whose partial sums reconstruct the signal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    IntervalSeries,
    InvalidValueError,
    PairMatrix,
    ParameterError,
    ShapeError,
)
from .embedding import StackingMode, default_window, stack, trajectory

#: Relative eigenvalue cutoff separating genuine rank from round-off.
DEFAULT_RANK_EPS = 1e-10

#: Relative asymmetry tolerated by the eigensolver.
SYMMETRY_RTOL = 1e-12


def pair_cross_covariance(x: PairMatrix, y: PairMatrix) -> np.ndarray:
    """Cross-covariance block between the rows of two pair matrices.

    Entry (j, j') is (1/6) * sum_q [2 a_j a'_j' + a_j b'_j' + b_j a'_j' + 2 b_j b'_j']
    over columns q.  Equal arguments give the symbolic covariance of one matrix.
    """
    if x.n_cols != y.n_cols:
        raise ShapeError(
            f"cross-covariance needs equal column counts, got {x.n_cols} and {y.n_cols}"
        )
    return (
        2.0 * (x.a @ y.a.T) + x.a @ y.b.T + x.b @ y.a.T + 2.0 * (x.b @ y.b.T)
    ) / 6.0


def symbolic_covariance(y: PairMatrix) -> np.ndarray:
    """Symbolic covariance matrix S of a pair matrix, exactly symmetric.

    The upper triangle is computed and mirrored so S == S.T bitwise.
    """
    s = pair_cross_covariance(y, y)
    upper = np.triu(s)
    s = upper + np.triu(s, 1).T
    s.flags.writeable = False
    return s


def stacked_covariance(
    series: Sequence[IntervalSeries], window: int, mode: StackingMode
) -> np.ndarray:
    """Covariance for stacked decomposition.

    Vertical: the (l*D) x (l*D) block matrix of all cross-covariance blocks.
    Horizontal: the l x l sum of per-series diagonal blocks.  Both agree with
    ``symbolic_covariance`` applied to the correspondingly stacked trajectory
    matrix.
    """
    blocks = [trajectory(s, window) for s in series]
    d = len(blocks)
    if d == 1 or mode is StackingMode.UNIVARIATE:
        if d != 1:
            raise ParameterError("univariate mode is only valid for a single series")
        return symbolic_covariance(blocks[0])
    l = blocks[0].n_rows
    if mode is StackingMode.VERTICAL:
        s = np.empty((l * d, l * d))
        for i in range(d):
            for j in range(i, d):
                blk = pair_cross_covariance(blocks[i], blocks[j])
                s[i * l : (i + 1) * l, j * l : (j + 1) * l] = blk
                if j > i:
                    s[j * l : (j + 1) * l, i * l : (i + 1) * l] = blk.T
        upper = np.triu(s)
        s = upper + np.triu(s, 1).T
    else:
        s = np.zeros((l, l))
        for blk in blocks:
            s += symbolic_covariance(blk)
        upper = np.triu(s)
        s = upper + np.triu(s, 1).T
    s.flags.writeable = False
    return s


@dataclass(frozen=True)
class EigenPairs:
    """Full symmetric eigendecomposition with descending eigenvalues.

    ``vectors`` holds orthonormal eigenvectors in columns, sign-normalized so
    each column's entry of largest magnitude is positive.  ``d`` is the rank
    cutoff: the number of eigenvalues exceeding rank_eps * lambda_1.
    """

    values: np.ndarray
    vectors: np.ndarray
    d: int

    @property
    def size(self) -> int:
        return int(self.values.size)


def eigen_sym(s: np.ndarray, rank_eps: float = DEFAULT_RANK_EPS) -> EigenPairs:
    """Eigendecompose a symmetric matrix; deterministic for fixed input bytes."""
    s = np.asarray(s, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {s.shape}")
    scale = float(np.max(np.abs(s))) if s.size else 0.0
    if scale > 0 and float(np.max(np.abs(s - s.T))) > SYMMETRY_RTOL * scale:
        raise InvalidValueError("matrix is not symmetric within tolerance")
    values, vectors = np.linalg.eigh(s)
    values = values[::-1].copy()
    vectors = vectors[:, ::-1].copy()
    # Fix signs: largest-magnitude entry of each eigenvector made positive.
    lead = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[lead, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    vectors *= signs
    lam1 = float(values[0]) if values.size else 0.0
    if lam1 <= 0:
        d = 0
    else:
        d = int(np.sum(values > rank_eps * lam1))
    values.flags.writeable = False
    vectors.flags.writeable = False
    return EigenPairs(values=values, vectors=vectors, d=d)


def elementary_matrices(y: PairMatrix, eig: EigenPairs) -> list[PairMatrix]:
    """Rank-one elementary pair matrices Y_1..Y_d for a trajectory matrix.

    Y_i projects both component grids onto the i-th eigenvector:
    Y_i = u_i (u_i^T A), u_i (u_i^T B).  Their sum over i <= d recovers Y.
    """
    if eig.vectors.shape[0] != y.n_rows:
        raise ShapeError(
            f"eigenvectors of length {eig.vectors.shape[0]} do not match "
            f"{y.n_rows} matrix rows"
        )
    u = eig.vectors[:, : eig.d]
    wa = u.T @ y.a
    wb = u.T @ y.b
    return [
        PairMatrix(np.outer(u[:, i], wa[i]), np.outer(u[:, i], wb[i]))
        for i in range(eig.d)
    ]


@dataclass(frozen=True)
class Decomposition:
    """Result of the symbolic SVD step for one (possibly stacked) trajectory matrix.

    ``window`` is the per-series window l; for vertical stacking the
    trajectory matrix has window * n_series rows.  Elementary matrices are
    materialized on demand from the stored eigenbasis projections.
    """

    mode: StackingMode
    window: int
    k: int
    n_series: int
    series_length: int
    trajectory: PairMatrix
    eig: EigenPairs
    _wa: np.ndarray
    _wb: np.ndarray

    @property
    def d(self) -> int:
        return self.eig.d

    def elementary_matrix(self, component: int) -> PairMatrix:
        """Elementary pair matrix for a 1-based component index."""
        if not 1 <= component <= self.d:
            raise ParameterError(
                f"component must lie in [1, {self.d}], got {component}"
            )
        i = component - 1
        u = self.eig.vectors[:, i]
        return PairMatrix(np.outer(u, self._wa[i]), np.outer(u, self._wb[i]))

    @property
    def elementary(self) -> list[PairMatrix]:
        """All elementary matrices Y_1..Y_d (built fresh on each access)."""
        return [self.elementary_matrix(i) for i in range(1, self.d + 1)]

    def grouped_arrays(self, indices: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
        """Component grids of sum(Y_i, i in indices) for 1-based indices."""
        idx = [i - 1 for i in indices]
        u = self.eig.vectors[:, idx]
        return u @ self._wa[idx], u @ self._wb[idx]


def _build(
    mat: PairMatrix,
    mode: StackingMode,
    window: int,
    n_series: int,
    series_length: int,
    s: np.ndarray,
    rank_eps: float,
) -> Decomposition:
    eig = eigen_sym(s, rank_eps=rank_eps)
    u = eig.vectors[:, : eig.d]
    wa = u.T @ mat.a
    wb = u.T @ mat.b
    wa.flags.writeable = False
    wb.flags.writeable = False
    k = series_length - window + 1
    return Decomposition(
        mode=mode,
        window=window,
        k=k,
        n_series=n_series,
        series_length=series_length,
        trajectory=mat,
        eig=eig,
        _wa=wa,
        _wb=wb,
    )


def decompose(
    y: IntervalSeries, window: int | None = None, rank_eps: float = DEFAULT_RANK_EPS
) -> Decomposition:
    """Univariate decomposition: embed, build S, eigendecompose."""
    if window is None:
        window = default_window(len(y))
    mat = trajectory(y, window)
    return _build(
        mat, StackingMode.UNIVARIATE, int(window), 1, len(y), symbolic_covariance(mat), rank_eps
    )


def decompose_stacked(
    series: Sequence[IntervalSeries],
    window: int | None = None,
    mode: StackingMode = StackingMode.VERTICAL,
    rank_eps: float = DEFAULT_RANK_EPS,
) -> Decomposition:
    """Multivariate decomposition over vertically or horizontally stacked trajectories."""
    series = list(series)
    if len(series) == 1 and mode is StackingMode.UNIVARIATE:
        return decompose(series[0], window=window, rank_eps=rank_eps)
    if mode is StackingMode.UNIVARIATE:
        raise ParameterError("univariate mode is only valid for a single series")
    n = len(series[0])
    if window is None:
        window = default_window(n, len(series), mode)
    mat = stack(series, window, mode)
    s = stacked_covariance(series, window, mode)
    return _build(mat, mode, int(window), len(series), n, s, rank_eps)
