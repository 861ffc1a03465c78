"""Candidate grids and noisy synthetic objectives"""

from .grid import CandidateGrid, build_grid
from .objectives import Objective, ObjectiveFamily, raw_value, raw_values
from .environment import Environment, build_environment, evaluate, true_optimum

__all__ = [
    "CandidateGrid",
    "build_grid",
    "Objective",
    "ObjectiveFamily",
    "raw_value",
    "raw_values",
    "Environment",
    "build_environment",
    "evaluate",
    "true_optimum",
]
