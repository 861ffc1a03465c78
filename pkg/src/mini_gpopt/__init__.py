"""
mini-gpopt - Low-switching Gaussian-process optimization on finite candidate sets.

Provides:
- Weighted unique-candidate GP posterior (exact, O(q^3) per refit)
- mini-GP-UCB / mini-GP-EI epoch loop with variance-threshold batch lengths
- GP-UCB, GP-EI, epsilon-greedy and uniform baselines
- Synthetic benchmark grids, regret metrics and an experiment harness
"""

from .errors import ConfigurationError, GPOptError, NumericalError, UsageError
from .gp import KernelSpec, UniqueHistory, history_add, naive_posterior, posterior_fit
from .benchmarks import CandidateGrid, Environment, ObjectiveFamily, build_environment, build_grid
from .policies import (
    AcquisitionKind,
    BetaSchedule,
    RunResult,
    run_epsilon_greedy,
    run_gp_ucb,
    run_mini,
    run_uniform,
)
from .metrics import compute_regret, info_gain, summarize

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "GPOptError",
    "NumericalError",
    "UsageError",
    "KernelSpec",
    "UniqueHistory",
    "history_add",
    "naive_posterior",
    "posterior_fit",
    "CandidateGrid",
    "Environment",
    "ObjectiveFamily",
    "build_environment",
    "build_grid",
    "AcquisitionKind",
    "BetaSchedule",
    "RunResult",
    "run_epsilon_greedy",
    "run_gp_ucb",
    "run_mini",
    "run_uniform",
    "compute_regret",
    "info_gain",
    "summarize",
]
