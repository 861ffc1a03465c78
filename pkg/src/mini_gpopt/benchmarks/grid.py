"""
Finite candidate sets.

A regular grid places `points_per_dim` evenly spaced values (endpoints
included) on every axis; grid indices enumerate multi-indices in row-major
order.
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..config import get_settings
from ..errors import ConfigurationError, UsageError
from ..gp.history import Candidate

Bound = Union[float, Sequence[float]]


@dataclass(frozen=True)
class CandidateGrid:
    """
    Finite decision set.

    Attributes:
        coordinates: (|A|, d) candidate coordinates
        points_per_dim: p for regular grids, None for arbitrary point sets
        lower: per-dimension lower bounds
        upper: per-dimension upper bounds
    """
    coordinates: np.ndarray
    points_per_dim: Optional[int] = None
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None

    @classmethod
    def from_points(cls, points) -> "CandidateGrid":
        """Wrap an arbitrary finite (n, d) point set"""
        coords = np.atleast_2d(np.asarray(points, dtype=float))
        if coords.shape[0] == 0:
            raise UsageError("A candidate set needs at least one point")
        coords.setflags(write=False)
        return cls(
            coordinates=coords,
            lower=coords.min(axis=0),
            upper=coords.max(axis=0),
        )

    @property
    def size(self) -> int:
        return int(self.coordinates.shape[0])

    @property
    def dim(self) -> int:
        return int(self.coordinates.shape[1])

    @property
    def is_regular(self) -> bool:
        return self.points_per_dim is not None

    @property
    def shape(self) -> Tuple[int, ...]:
        if not self.is_regular:
            raise UsageError("Point-set candidates have no grid shape")
        return (self.points_per_dim,) * self.dim

    def candidate(self, index: int) -> Candidate:
        if not 0 <= index < self.size:
            raise UsageError(f"Candidate index {index} outside [0, {self.size})")
        return Candidate(index=int(index), coordinates=self.coordinates[index])

    def multi_index(self, index: int) -> Tuple[int, ...]:
        """Grid index -> per-axis positions"""
        return tuple(int(m) for m in np.unravel_index(index, self.shape))

    def flat_index(self, multi_index: Sequence[int]) -> int:
        """Per-axis positions -> grid index"""
        return int(np.ravel_multi_index(tuple(multi_index), self.shape))

    def __len__(self) -> int:
        return self.size


def _per_dim(bound: Bound, dim: int, name: str) -> np.ndarray:
    arr = np.broadcast_to(np.asarray(bound, dtype=float), (dim,)).copy()
    if not np.all(np.isfinite(arr)):
        raise ConfigurationError(f"{name} bounds must be finite")
    return arr


def build_grid(
    dim: int,
    points_per_dim: int,
    lower: Bound = -5.0,
    upper: Bound = 5.0,
    max_size: Optional[int] = None
) -> CandidateGrid:
    """
    Build a regular grid of points_per_dim ** dim candidates.

    Row i holds lower + (upper - lower) * m_k / (p - 1) for the row-major
    multi-index m of i.

    Raises:
        ConfigurationError: On p < 2, lower >= upper, or a grid above the size cap
    """
    if dim < 1:
        raise ConfigurationError(f"Grid dimension must be >= 1, got {dim}")
    if points_per_dim < 2:
        raise ConfigurationError(f"points_per_dim must be >= 2, got {points_per_dim}")
    lo = _per_dim(lower, dim, "lower")
    hi = _per_dim(upper, dim, "upper")
    if np.any(lo >= hi):
        raise ConfigurationError("Every lower bound must be below its upper bound")

    cap = max_size if max_size is not None else get_settings().MAX_GRID_SIZE
    size = points_per_dim ** dim
    if size > cap:
        raise ConfigurationError(
            f"Grid of {points_per_dim}^{dim} = {size} candidates exceeds the cap of {cap}"
        )

    axes = [
        lo[k] + (hi[k] - lo[k]) * np.arange(points_per_dim) / (points_per_dim - 1)
        for k in range(dim)
    ]
    mesh = np.meshgrid(*axes, indexing="ij")
    coords = np.stack([m.ravel() for m in mesh], axis=1)
    coords.setflags(write=False)
    return CandidateGrid(
        coordinates=coords,
        points_per_dim=points_per_dim,
        lower=lo,
        upper=hi,
    )
