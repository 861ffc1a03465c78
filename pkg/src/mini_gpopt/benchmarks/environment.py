"""
Noisy evaluation environment: a candidate grid paired with an objective.

Each evaluation returns f(x) + xi * z with z ~ N(0, 1) and consumes exactly
one standard-normal draw from the caller's generator, also when xi = 0.
"""
from typing import List, Optional, Tuple
import logging

import numpy as np

from ..errors import ConfigurationError, UsageError
from .grid import Bound, CandidateGrid, build_grid
from .objectives import Objective, ObjectiveFamily, raw_values

logger = logging.getLogger(__name__)


class Environment:
    """
    Finite-armed noisy environment.

    The noiseless reward of every candidate is computed once at construction so
    regret and optimum queries are table lookups.
    """

    def __init__(self, grid: CandidateGrid, objective: Objective):
        self.grid = grid
        self.objective = objective
        self.raw = raw_values(objective.family, grid.coordinates)
        self.values = objective.reward(self.raw)
        self.values.setflags(write=False)
        self._optimum_index = int(np.argmax(self.values))

    @property
    def size(self) -> int:
        return self.grid.size

    @property
    def noise_std(self) -> float:
        return self.objective.noise_std

    def evaluate(self, index: int, rng: np.random.Generator) -> float:
        """Noisy reward at a candidate index"""
        return evaluate(self.objective, self.grid, index, rng, values=self.values)

    def evaluate_block(self, index: int, rng: np.random.Generator, count: int) -> List[float]:
        """
        `count` noisy rewards at one candidate with the noise pre-drawn in step order.

        Produces the same values as `count` successive evaluate() calls.
        """
        noise = [rng.standard_normal() for _ in range(count)]
        base = float(self.values[index])
        return [base + self.objective.noise_std * z for z in noise]

    def true_optimum(self) -> Tuple[int, float]:
        return self._optimum_index, float(self.values[self._optimum_index])

    def regret(self, indices) -> np.ndarray:
        """Instantaneous regret f* - f(x) for each index"""
        return float(self.values[self._optimum_index]) - self.values[np.asarray(indices)]

    def uniform_average_regret(self) -> float:
        """Expected per-step regret of a policy picking candidates uniformly at random"""
        return float(self.values[self._optimum_index] - self.values.mean())

    def noise_stds(self) -> np.ndarray:
        """Per-candidate reward standard deviation"""
        return self.objective.noise_stds(self.size)

    def describe(self) -> dict:
        index, value = self.true_optimum()
        return {
            "objective": self.objective.family.value,
            "candidates": self.size,
            "dim": self.grid.dim,
            "noise_std": self.objective.noise_std,
            "scale": self.objective.scale,
            "optimum_index": index,
            "optimum_value": value,
        }


def evaluate(
    objective: Objective,
    grid: CandidateGrid,
    index: int,
    rng: np.random.Generator,
    values: Optional[np.ndarray] = None
) -> float:
    """
    One noisy evaluation y = -raw(x) / scale + xi * z.

    Raises:
        UsageError: If the index is outside the grid
    """
    if not 0 <= index < grid.size:
        raise UsageError(f"Candidate index {index} outside [0, {grid.size})")
    z = rng.standard_normal()
    if values is None:
        base = float(objective.reward(raw_values(objective.family, grid.coordinates[index]))[0])
    else:
        base = float(values[index])
    return base + objective.noise_std * z


def true_optimum(objective: Objective, grid: CandidateGrid) -> Tuple[int, float]:
    """Exhaustive scan for the best grid candidate (lowest index among ties)"""
    values = objective.reward(raw_values(objective.family, grid.coordinates))
    best = int(np.argmax(values))
    return best, float(values[best])


def build_environment(
    family: ObjectiveFamily,
    dim: int = 3,
    points_per_dim: int = 22,
    lower: Bound = -5.0,
    upper: Bound = 5.0,
    normalize: bool = True,
    noise_fraction: float = 0.01,
    noise_std: Optional[float] = None,
    max_size: Optional[int] = None
) -> Environment:
    """
    Build a grid environment for a benchmark function.

    Args:
        family: Benchmark function
        dim, points_per_dim, lower, upper: Grid parameters
        normalize: Divide raw values by their range over the grid so rewards span [-max, -min] / range
        noise_fraction: Default xi as a fraction of the reward range
        noise_std: Explicit xi (reward units), overrides noise_fraction
        max_size: Grid size cap (defaults to MAX_GRID_SIZE)

    Returns:
        Environment
    """
    if noise_fraction < 0:
        raise ConfigurationError(f"noise_fraction must be >= 0, got {noise_fraction}")
    grid = build_grid(dim, points_per_dim, lower, upper, max_size=max_size)
    raw = raw_values(family, grid.coordinates)
    raw_range = float(raw.max() - raw.min())
    if raw_range <= 0:
        raw_range = 1.0

    scale = raw_range if normalize else 1.0
    reward_range = raw_range / scale
    xi = noise_std if noise_std is not None else noise_fraction * reward_range

    logger.info(
        f"Environment {ObjectiveFamily(family).value}: {grid.size} candidates in {dim}-D, "
        f"scale={scale:.6g}, xi={xi:.6g}"
    )
    return Environment(grid, Objective(family=family, noise_std=xi, scale=scale))
