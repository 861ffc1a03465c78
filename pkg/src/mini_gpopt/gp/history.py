"""
Evaluation history stored over unique candidates.

A history of t evaluations is kept as q unique rows with multiplicity
counts and summed feedback. Duplicates are detected by candidate index, never
by floating-point coordinate comparison.
"""
from dataclasses import dataclass, field
from typing import Dict, Sequence

import numpy as np

from ..errors import UsageError


@dataclass(frozen=True)
class Candidate:
    """A point of the finite decision set"""
    index: int
    coordinates: np.ndarray = field(compare=False)

    def __post_init__(self):
        coords = np.asarray(self.coordinates, dtype=float).ravel()
        coords.setflags(write=False)
        object.__setattr__(self, "coordinates", coords)

    @property
    def dim(self) -> int:
        return int(self.coordinates.shape[0])


@dataclass(frozen=True)
class UniqueHistory:
    """
    Unique evaluated candidates with multiplicities.

    Attributes:
        unique_points: (q, d) coordinates, one row per distinct candidate
        counts: (q,) evaluation counts, all >= 1
        feedback_sum: (q,) sum of every feedback received by each candidate
        total_steps: t, equal to counts.sum()
        index_of: candidate index -> row in unique_points
        dim: coordinate dimension (fixed by the first candidate added)
    """
    unique_points: np.ndarray
    counts: np.ndarray
    feedback_sum: np.ndarray
    total_steps: int
    index_of: Dict[int, int]
    dim: int

    @classmethod
    def empty(cls, dim: int) -> "UniqueHistory":
        return cls(
            unique_points=np.zeros((0, dim), dtype=float),
            counts=np.zeros(0, dtype=np.int64),
            feedback_sum=np.zeros(0, dtype=float),
            total_steps=0,
            index_of={},
            dim=dim,
        )

    @property
    def size(self) -> int:
        """q, the number of unique candidates"""
        return int(self.counts.shape[0])

    @property
    def candidate_indices(self) -> np.ndarray:
        """Candidate index of each row, in row order"""
        out = np.empty(self.size, dtype=np.int64)
        for index, row in self.index_of.items():
            out[row] = index
        return out

    @property
    def feedback_mean(self) -> np.ndarray:
        """Per-candidate average feedback"""
        if self.size == 0:
            return np.zeros(0, dtype=float)
        return self.feedback_sum / self.counts

    def expanded(self) -> np.ndarray:
        """Row-repeated (t, d) points, one row per evaluation"""
        return np.repeat(self.unique_points, self.counts, axis=0)

    def __contains__(self, candidate_index: int) -> bool:
        return candidate_index in self.index_of


def history_add(
    history: UniqueHistory,
    candidate: Candidate,
    feedbacks: Sequence[float]
) -> UniqueHistory:
    """
    Record one or more evaluations of a candidate.

    An already-present candidate has its count and feedback sum increased; a
    new candidate is appended as a new unique row. The input history is left
    untouched.

    Args:
        history: Current history
        candidate: Evaluated candidate
        feedbacks: Non-empty list of observed rewards

    Returns:
        New UniqueHistory

    Raises:
        UsageError: If feedbacks is empty or the candidate dimension differs
    """
    values = [float(v) for v in feedbacks]
    if not values:
        raise UsageError("history_add requires at least one feedback value")
    if candidate.dim != history.dim:
        raise UsageError(
            f"Candidate has dimension {candidate.dim}, history has {history.dim}"
        )

    n_new = len(values)
    total = sum(values)
    row = history.index_of.get(candidate.index)

    if row is not None:
        counts = history.counts.copy()
        feedback_sum = history.feedback_sum.copy()
        counts[row] += n_new
        feedback_sum[row] += total
        return UniqueHistory(
            unique_points=history.unique_points,
            counts=counts,
            feedback_sum=feedback_sum,
            total_steps=history.total_steps + n_new,
            index_of=history.index_of,
            dim=history.dim,
        )

    index_of = dict(history.index_of)
    index_of[candidate.index] = history.size
    return UniqueHistory(
        unique_points=np.vstack([history.unique_points, candidate.coordinates[None, :]]),
        counts=np.append(history.counts, n_new),
        feedback_sum=np.append(history.feedback_sum, total),
        total_steps=history.total_steps + n_new,
        index_of=index_of,
        dim=history.dim,
    )
