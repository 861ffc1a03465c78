"""Optimization policies"""

from .acquisition import (
    AcquisitionKind,
    BetaSchedule,
    BetaVariant,
    beta_value,
    ei_score,
    select_candidate,
    ucb_score,
)
from .results import EpochTrace, RunResult
from .mini_meta import FeedbackDelivery, batch_length, run_epochs, run_mini
from .baselines import EpsilonSchedule, run_epsilon_greedy, run_gp_ucb, run_uniform

__all__ = [
    "AcquisitionKind",
    "BetaSchedule",
    "BetaVariant",
    "beta_value",
    "ei_score",
    "select_candidate",
    "ucb_score",
    "EpochTrace",
    "RunResult",
    "FeedbackDelivery",
    "batch_length",
    "run_epochs",
    "run_mini",
    "EpsilonSchedule",
    "run_epsilon_greedy",
    "run_gp_ucb",
    "run_uniform",
]
