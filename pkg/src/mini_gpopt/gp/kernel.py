"""
Bounded positive-definite kernels and kernel-matrix assembly.

Only the Gaussian family ships. Every kernel here satisfies
0 < k(x, x) <= KAPPA_SQUARED, the bound used by the switch-count analysis.
"""
from dataclasses import dataclass
from enum import Enum
import math

import numpy as np
from scipy.spatial.distance import cdist

from ..errors import ConfigurationError, UsageError

# Upper bound on k(x, x) for every shipped family
KAPPA_SQUARED = 1.0


class KernelFamily(str, Enum):
    """Supported kernel families"""
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class KernelSpec:
    """
    Kernel family and bandwidth.

    For the Gaussian family k(x, y) = exp(-||x - y||^2 / (2 bandwidth^2)).
    """
    bandwidth: float
    family: KernelFamily = KernelFamily.GAUSSIAN

    def __post_init__(self):
        if not (self.bandwidth > 0 and math.isfinite(self.bandwidth)):
            raise ConfigurationError(
                f"Kernel bandwidth must be a positive finite number, got {self.bandwidth}"
            )
        if not isinstance(self.family, KernelFamily):
            object.__setattr__(self, "family", KernelFamily(self.family))

    @classmethod
    def from_squared_bandwidth(cls, bandwidth_squared: float) -> "KernelSpec":
        """Build a spec from sigma^2, the unit hyperparameter grids are written in"""
        if not bandwidth_squared > 0:
            raise ConfigurationError(
                f"Squared bandwidth must be positive, got {bandwidth_squared}"
            )
        return cls(bandwidth=math.sqrt(bandwidth_squared))

    @property
    def kappa_squared(self) -> float:
        return KAPPA_SQUARED

    def diagonal(self, n: int) -> np.ndarray:
        """k(x, x) for n points (constant for stationary families)"""
        return np.ones(n, dtype=float)


def _as_points(X, name: str) -> np.ndarray:
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise UsageError(f"{name} must be a 2-D array of coordinates, got shape {arr.shape}")
    return arr


def kernel_eval(spec: KernelSpec, x, y) -> float:
    """
    Evaluate k(x, y) for two coordinate vectors.

    Raises:
        UsageError: If x and y have different dimensions
    """
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape:
        raise UsageError(f"Dimension mismatch: {x.shape[0]} vs {y.shape[0]}")
    diff = x - y
    sq = float(np.dot(diff, diff))
    return math.exp(-sq / (2.0 * spec.bandwidth ** 2))


def kernel_matrix(spec: KernelSpec, X, Y) -> np.ndarray:
    """
    Assemble the n x m matrix K[i, j] = k(X[i], Y[j]).

    Squared distances are computed pairwise, so kernel_matrix(spec, X, X)
    is exactly symmetric.

    Raises:
        UsageError: If X and Y have different column counts
    """
    X = _as_points(X, "X")
    Y = _as_points(Y, "Y")
    if X.shape[1] != Y.shape[1]:
        raise UsageError(f"Dimension mismatch: X has {X.shape[1]} columns, Y has {Y.shape[1]}")
    if X.shape[0] == 0 or Y.shape[0] == 0:
        return np.zeros((X.shape[0], Y.shape[0]), dtype=float)

    sq = cdist(X, Y, metric="sqeuclidean")
    return np.exp(-sq / (2.0 * spec.bandwidth ** 2))
