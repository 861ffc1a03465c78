"""
Synthetic benchmark functions in their textbook (untransformed) forms.

All functions are minimized in their raw form; learners maximize the
negated value.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import ConfigurationError


class ObjectiveFamily(str, Enum):
    """Available benchmark functions"""
    ELLIPSOID = "ellipsoid"
    RASTRIGIN = "rastrigin"
    ROSENBROCK = "rosenbrock"
    SCHAFFER = "schaffer"


@dataclass(frozen=True)
class Objective:
    """
    Noisy objective.

    Attributes:
        family: Benchmark function
        noise_std: xi, standard deviation of the additive Gaussian noise in reward units
        scale: Rewards are -raw / scale (1.0 keeps the raw benchmark values)
    """
    family: ObjectiveFamily
    noise_std: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not isinstance(self.family, ObjectiveFamily):
            object.__setattr__(self, "family", ObjectiveFamily(self.family))
        if self.noise_std < 0:
            raise ConfigurationError(f"noise_std must be >= 0, got {self.noise_std}")
        if not self.scale > 0:
            raise ConfigurationError(f"scale must be positive, got {self.scale}")

    def reward(self, raw) -> np.ndarray:
        """Noiseless reward f = -raw / scale"""
        return -np.asarray(raw, dtype=float) / self.scale

    def noise_stds(self, size: int) -> np.ndarray:
        """Per-candidate noise standard deviation; constant xi under homoscedastic noise"""
        return np.full(size, self.noise_std, dtype=float)


def _ellipsoid(X: np.ndarray) -> np.ndarray:
    d = X.shape[1]
    if d == 1:
        weights = np.ones(1)
    else:
        weights = 10.0 ** (6.0 * np.arange(d) / (d - 1))
    return (X ** 2) @ weights


def _rastrigin(X: np.ndarray) -> np.ndarray:
    d = X.shape[1]
    return 10.0 * d + np.sum(X ** 2 - 10.0 * np.cos(2.0 * np.pi * X), axis=1)


def _rosenbrock(X: np.ndarray) -> np.ndarray:
    head, tail = X[:, :-1], X[:, 1:]
    return np.sum(100.0 * (tail - head ** 2) ** 2 + (1.0 - head) ** 2, axis=1)


def _schaffer(X: np.ndarray) -> np.ndarray:
    s = np.sqrt(X[:, :-1] ** 2 + X[:, 1:] ** 2)
    return np.sum(s ** 0.25 * (np.sin(50.0 * s ** 0.1) ** 2 + 1.0), axis=1)


_RAW = {
    ObjectiveFamily.ELLIPSOID: _ellipsoid,
    ObjectiveFamily.RASTRIGIN: _rastrigin,
    ObjectiveFamily.ROSENBROCK: _rosenbrock,
    ObjectiveFamily.SCHAFFER: _schaffer,
}


def raw_values(family: ObjectiveFamily, X) -> np.ndarray:
    """Raw benchmark values at every row of X"""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return _RAW[ObjectiveFamily(family)](X)


def raw_value(objective: Objective, x) -> float:
    """Raw (to-be-minimized) benchmark value at a single point"""
    return float(raw_values(objective.family, np.asarray(x, dtype=float).reshape(1, -1))[0])
