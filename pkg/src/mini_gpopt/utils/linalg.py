"""
Thin wrappers around the LAPACK Cholesky routines exposed through scipy.
"""
import numpy as np
from scipy.linalg import solve_triangular
from scipy.linalg.lapack import dpotrf

from ..errors import NumericalError


def cholesky_lower(A: np.ndarray) -> np.ndarray:
    """
    Lower Cholesky factor of a symmetric positive definite matrix via *dpotrf*.

    Args:
        A: (N, N) symmetric matrix

    Returns:
        Lower-triangular L with L @ L.T == A

    Raises:
        NumericalError: If the leading minor of order `pivot` is not positive definite
    """
    if A.shape == (0, 0):
        return np.zeros((0, 0), dtype=float)

    L, info = dpotrf(np.asarray(A, dtype=float), lower=True, clean=True)
    if info > 0:
        raise NumericalError(
            f"The leading minor of order {info} is not positive definite, "
            "the factorization could not be completed",
            pivot=int(info)
        )
    if info < 0:
        raise ValueError(f"The {-info}-th argument of dpotrf has an illegal value")
    return L


def forward_solve(L: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Solve L X = B for lower-triangular L"""
    if L.shape[0] == 0:
        return np.zeros(B.shape, dtype=float)
    return solve_triangular(L, B, lower=True, check_finite=False)


def cholesky_solve(L: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve (L L^T) x = b given the lower factor L"""
    if L.shape[0] == 0:
        return np.zeros(b.shape, dtype=float)
    z = solve_triangular(L, b, lower=True, check_finite=False)
    return solve_triangular(L.T, z, lower=False, check_finite=False)


def logdet_from_cholesky(L: np.ndarray) -> float:
    """Log determinant of L L^T from its Cholesky factor"""
    if L.shape[0] == 0:
        return 0.0
    return float(2.0 * np.log(np.diag(L)).sum())
