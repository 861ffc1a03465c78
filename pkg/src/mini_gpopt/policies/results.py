"""Records produced by a single optimization run."""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from ..gp.history import UniqueHistory


@dataclass(frozen=True)
class EpochTrace:
    """
    One epoch: a candidate chosen once and evaluated batch_length times.

    variance_at_selection is the raw posterior variance; the low-switching batch
    rule reads it in units of the regularization, see scaled_variance.
    """
    epoch_index: int
    candidate_index: int
    batch_length: int
    start_step: int
    variance_at_selection: float
    beta_used: float
    logdet_at_fit: float
    regularization: float = 1.0
    clamped: bool = False

    @property
    def scaled_variance(self) -> float:
        """sigma^2 / lambda, the variance the batch rule is applied to"""
        return self.variance_at_selection / self.regularization


@dataclass
class RunResult:
    """
    Step-level trace of one run.

    Attributes:
        algorithm: Policy name
        seed: Generator seed
        params: Hyperparameters the run used
        chosen: (T,) candidate index evaluated at each step
        rewards: (T,) noisy reward observed at each step
        epoch_of_step: (T,) 1-based decision round each step belongs to (h_t)
        unique_counts: (T,) number of distinct candidates evaluated by step t (q_t)
        elapsed: (T,) seconds since the loop started, measured after each step
        epochs: Epoch traces (GP policies only)
        history: Final unique-candidate history (GP policies only)
    """
    algorithm: str
    seed: int
    params: Dict[str, Any]
    chosen: np.ndarray
    rewards: np.ndarray
    epoch_of_step: np.ndarray
    unique_counts: np.ndarray
    elapsed: np.ndarray
    epochs: List[EpochTrace] = field(default_factory=list)
    history: Optional[UniqueHistory] = None

    @property
    def steps(self) -> int:
        return int(self.chosen.shape[0])

    @property
    def switch_counts(self) -> np.ndarray:
        """h_t"""
        return self.epoch_of_step

    @property
    def num_epochs(self) -> int:
        return int(self.epoch_of_step[-1]) if self.steps else 0

    @property
    def final_unique_count(self) -> int:
        return int(self.unique_counts[-1]) if self.steps else 0


def unique_count_trace(chosen: np.ndarray) -> np.ndarray:
    """q_t for a sequence of chosen indices"""
    seen = set()
    out = np.empty(len(chosen), dtype=np.int64)
    for t, index in enumerate(chosen):
        seen.add(int(index))
        out[t] = len(seen)
    return out
