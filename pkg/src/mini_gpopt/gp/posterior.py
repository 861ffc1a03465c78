"""
Gaussian-process posterior over unique candidates.

With W = diag(counts) and K_h the kernel matrix of the q unique points, the
posterior of the full t-row history is reproduced exactly from the q x q system

    A = W^{1/2} K_h W^{1/2} + lambda I = L L^T

    mu(x)      = k(x, X_h) W^{1/2} A^{-1} W^{-1/2} y_h
    sigma^2(x) = k(x, x) - || L^{-1} W^{1/2} k(X_h, x) ||^2

where y_h holds the summed feedback of each unique candidate. Fitting costs
O(q^3), each query O(q^2), independently of t.

naive_posterior is the O(t^3) textbook computation on the expanded history and
is only used as a reference in tests.
"""
from dataclasses import dataclass
from typing import Optional, Tuple, Union
import logging

import numpy as np

from ..config import get_settings
from ..errors import ConfigurationError, NumericalError
from ..utils.linalg import cholesky_lower, cholesky_solve, forward_solve, logdet_from_cholesky
from .history import Candidate, UniqueHistory
from .kernel import KernelSpec, kernel_matrix

logger = logging.getLogger(__name__)

Point = Union[Candidate, np.ndarray]


@dataclass(frozen=True)
class PosteriorModel:
    """
    Factorized weighted kernel system for one history.

    Immutable: fitting produces a new model, queries never mutate it.
    """
    history: UniqueHistory
    kernel: KernelSpec
    lam: float
    chol: np.ndarray
    sqrt_counts: np.ndarray
    mean_weights: np.ndarray
    logdet: float

    @property
    def size(self) -> int:
        return self.history.size

    def predict(self, X) -> Tuple[np.ndarray, np.ndarray]:
        """
        Posterior mean and variance at a batch of points.

        Args:
            X: (n, d) coordinates

        Returns:
            (mean, variance), each of shape (n,)

        Raises:
            NumericalError: If a variance falls below -VARIANCE_TOLERANCE
        """
        X = np.atleast_2d(np.asarray(X, dtype=float))
        prior_var = self.kernel.diagonal(X.shape[0])
        if self.size == 0:
            return np.zeros(X.shape[0], dtype=float), prior_var

        K_hx = kernel_matrix(self.kernel, self.history.unique_points, X)
        mean = K_hx.T @ self.mean_weights
        V = forward_solve(self.chol, self.sqrt_counts[:, None] * K_hx)
        var = prior_var - np.einsum("ij,ij->j", V, V)
        return mean, _clamp_variance(var)

    def mean(self, x: Point) -> float:
        return float(self.predict(_coordinates(x))[0][0])

    def variance(self, x: Point) -> float:
        return float(self.predict(_coordinates(x))[1][0])


def _coordinates(x: Point) -> np.ndarray:
    if isinstance(x, Candidate):
        return x.coordinates[None, :]
    return np.atleast_2d(np.asarray(x, dtype=float))


def _clamp_variance(var: np.ndarray) -> np.ndarray:
    tol = get_settings().VARIANCE_TOLERANCE
    worst = float(var.min()) if var.size else 0.0
    if worst < -tol:
        raise NumericalError(
            f"Posterior variance {worst:.3e} is below -{tol:.0e}", value=worst
        )
    if worst < 0:
        logger.debug(f"Clamping negative posterior variance {worst:.3e} to zero")
    return np.maximum(var, 0.0)


def posterior_fit(history: UniqueHistory, kernel: KernelSpec, lam: float) -> PosteriorModel:
    """
    Factorize W^{1/2} K_h W^{1/2} + lambda I for a history.

    Args:
        history: Unique-candidate history (q = 0 yields the prior)
        kernel: Kernel specification
        lam: Regularization lambda > 0

    Returns:
        PosteriorModel ready for O(q^2) queries

    Raises:
        ConfigurationError: If lam is not positive
        NumericalError: If the factorization fails (carries the failing pivot)
    """
    if not lam > 0:
        raise ConfigurationError(f"Regularization lambda must be positive, got {lam}")

    q = history.size
    if q == 0:
        return PosteriorModel(
            history=history,
            kernel=kernel,
            lam=float(lam),
            chol=np.zeros((0, 0)),
            sqrt_counts=np.zeros(0),
            mean_weights=np.zeros(0),
            logdet=0.0,
        )

    sqrt_counts = np.sqrt(history.counts.astype(float))
    K = kernel_matrix(kernel, history.unique_points, history.unique_points)
    A = sqrt_counts[:, None] * K * sqrt_counts[None, :]
    A[np.diag_indices(q)] += lam

    try:
        L = cholesky_lower(A)
    except NumericalError as e:
        logger.error(f"Factorization of the {q}x{q} weighted system failed at pivot {e.pivot}")
        raise

    # W^{1/2} A^{-1} W^{-1/2} y_h
    mean_weights = sqrt_counts * cholesky_solve(L, history.feedback_sum / sqrt_counts)
    logdet = logdet_from_cholesky(L) - q * np.log(lam)

    return PosteriorModel(
        history=history,
        kernel=kernel,
        lam=float(lam),
        chol=L,
        sqrt_counts=sqrt_counts,
        mean_weights=mean_weights,
        logdet=max(float(logdet), 0.0),
    )


def posterior_mean(model: PosteriorModel, x: Point) -> float:
    """Posterior mean at a single point"""
    return model.mean(x)


def posterior_var(model: PosteriorModel, x: Point) -> float:
    """Posterior variance at a single point"""
    return model.variance(x)


def log_det_weighted(model: PosteriorModel) -> float:
    """logdet(W^{1/2} K_h W^{1/2} / lambda + I); zero for the prior"""
    return model.logdet


def naive_posterior(
    full_points,
    full_feedback,
    kernel: KernelSpec,
    lam: float,
    x: Point,
    K_full: Optional[np.ndarray] = None
) -> Tuple[float, float]:
    """
    Textbook GP posterior on the expanded t-row history.

        mu(x)      = k(x, X_t)(K_t + lambda I)^{-1} y_t
        sigma^2(x) = k(x, x) - k(x, X_t)(K_t + lambda I)^{-1} k(X_t, x)

    O(t^3); reference implementation for tests, never used by the optimizers.
    """
    coords = _coordinates(x)
    y = np.asarray(full_feedback, dtype=float).ravel()
    if y.shape[0] == 0:
        return 0.0, float(kernel.diagonal(1)[0])

    X = np.atleast_2d(np.asarray(full_points, dtype=float))
    K = kernel_matrix(kernel, X, X) if K_full is None else K_full
    G = K + lam * np.eye(K.shape[0])
    k_x = kernel_matrix(kernel, X, coords)[:, 0]

    mean = float(k_x @ np.linalg.solve(G, y))
    var = float(kernel.diagonal(1)[0] - k_x @ np.linalg.solve(G, k_x))
    return mean, var
