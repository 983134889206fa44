"""Dense least-squares step solve for Gauss-Newton iterations.

Matrices here are tiny (a handful of rows and columns), so plain numpy
arrays stand in for dedicated matrix/vector types.
"""
from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular

from .errors import NumericalFailure, SingularSystemError


def as_matrix(J) -> np.ndarray:
    J = np.atleast_2d(np.asarray(J, dtype=float))
    if J.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {J.shape}")
    if not np.all(np.isfinite(J)):
        raise NumericalFailure("matrix has non-finite entries")
    return J


def as_vector(v) -> np.ndarray:
    v = np.atleast_1d(np.asarray(v, dtype=float))
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise NumericalFailure("vector has non-finite entries")
    return v


def numerical_rank(R: np.ndarray, shape: tuple[int, int]) -> int:
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag.max() == 0.0:
        return 0
    tol = max(shape) * np.finfo(float).eps * diag.max()
    return int(np.count_nonzero(diag >= tol))


def solve_gn_step(J, f) -> np.ndarray:
    """Return h minimising ||f + J h||, i.e. h = -pinv(J) f for full-rank J.

    Uses a Householder QR of J followed by one step of iterative
    refinement, which makes steps that should cancel a linear residual
    exactly do so in floating point.

    Raises SingularSystemError (carrying the estimated rank) when J is
    numerically rank deficient.
    """
    J = as_matrix(J)
    f = as_vector(f)
    m, n = J.shape
    if f.size != m:
        raise ValueError(f"residual length {f.size} does not match {m} Jacobian rows")
    if m < n:
        raise SingularSystemError(
            f"under-determined system: {m} residuals for {n} parameters", rank=m, ncols=n
        )
    Q, R = np.linalg.qr(J, mode="reduced")
    rank = numerical_rank(R, J.shape)
    if rank < n:
        raise SingularSystemError(
            f"Jacobian is rank deficient (rank {rank} < {n})", rank=rank, ncols=n
        )
    h = solve_triangular(R, -(Q.T @ f))
    s = f + J @ h
    h = h + solve_triangular(R, -(Q.T @ s))
    return h


def descent_check(J, f, h) -> bool:
    """True iff h is a descent direction for ½||f||², i.e. hᵀ(Jᵀf) < 0."""
    J = np.asarray(J, dtype=float)
    grad = J.T @ np.asarray(f, dtype=float)
    return bool(np.dot(np.asarray(h, dtype=float), grad) < 0.0)
