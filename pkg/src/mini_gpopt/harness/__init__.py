"""Experiment configuration, execution and serialization"""

from .experiment import (
    AlgorithmName,
    ExperimentConfig,
    LambdaMode,
    TimingMode,
    combination_id,
    default_experiment_config,
    load_experiment_config,
    parse_experiment_config,
)
from .export import Manifest, ManifestEntry, STEP_COLUMNS, step_frame, write_step_csv
from .runner import (
    ExperimentReport,
    RunTask,
    best_combinations,
    execute_task,
    expand_tasks,
    oracle_lambda,
    run_experiment,
)
from .plotting import load_summary, plot_summaries

__all__ = [
    "AlgorithmName",
    "ExperimentConfig",
    "LambdaMode",
    "TimingMode",
    "combination_id",
    "default_experiment_config",
    "load_experiment_config",
    "parse_experiment_config",
    "Manifest",
    "ManifestEntry",
    "STEP_COLUMNS",
    "step_frame",
    "write_step_csv",
    "ExperimentReport",
    "RunTask",
    "best_combinations",
    "execute_task",
    "expand_tasks",
    "oracle_lambda",
    "run_experiment",
    "load_summary",
    "plot_summaries",
]
