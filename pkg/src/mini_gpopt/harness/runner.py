"""
Experiment runner.

Expands an ExperimentConfig into (algorithm, combination, seed) tasks, executes
them inline or over a process pool, and serializes step CSVs, per-combination
summaries, the best-combination report and plots.
"""
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import repeat
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union
import logging

import numpy as np
from pydantic import BaseModel, Field

from ..benchmarks.environment import Environment, build_environment
from ..benchmarks.grid import CandidateGrid
from ..benchmarks.objectives import Objective
from ..config import get_settings
from ..errors import ConfigurationError, UsageError
from ..gp.kernel import KernelSpec
from ..metrics import SummaryTable, summarize
from ..policies.acquisition import AcquisitionKind, BetaSchedule
from ..policies.baselines import EpsilonSchedule, run_epsilon_greedy, run_gp_ucb, run_uniform
from ..policies.mini_meta import run_mini
from ..policies.results import RunResult
from ..utils.bound_checks import create_bound_checker
from .experiment import (
    AlgorithmName,
    ExperimentConfig,
    LambdaMode,
    TimingMode,
    combination_id,
)
from .export import Manifest, ManifestEntry, write_model_json, write_step_csv
from .plotting import plot_summaries

logger = logging.getLogger(__name__)

SELECTION_RULE = "lowest mean final average regret R_T / T over seeds"

# Per-process environment cache, keyed by EnvironmentSection.cache_key()
_ENVIRONMENTS: Dict[str, Environment] = {}


@dataclass(frozen=True, order=True)
class RunTask:
    """One (algorithm, combination, seed) unit of work"""
    algorithm: str
    combination: str
    seed: int
    params: Dict[str, float] = field(compare=False, default_factory=dict)


class BestCombination(BaseModel):
    combination: str
    params: Dict[str, float]
    final: Dict[str, float]


class ExperimentReport(BaseModel):
    """Best hyperparameter combination per algorithm"""
    experiment: str
    selection: str = SELECTION_RULE
    regularization: float
    noise_std: float
    best: Dict[str, BestCombination] = Field(default_factory=dict)


def oracle_lambda(objective: Objective, grid: CandidateGrid, xi: Optional[float] = None) -> float:
    """
    Regularization set to the squared 90th percentile of the per-candidate
    reward standard deviation.

    Under homoscedastic noise every candidate has std xi, so this is xi^2.

    Raises:
        ConfigurationError: If the noise level is zero (lambda must be positive)
    """
    if xi is None:
        stds = objective.noise_stds(grid.size)
    else:
        stds = np.full(grid.size, xi, dtype=float)
    return _percentile_lambda(stds)


def _percentile_lambda(stds: np.ndarray) -> float:
    lam = float(np.percentile(stds, 90)) ** 2
    if not lam > 0:
        raise ConfigurationError(
            "Oracle regularization needs a positive noise level; set xi or use an explicit lambda"
        )
    return lam


def get_environment(config: ExperimentConfig) -> Environment:
    """Build (or reuse) the environment described by the config"""
    section = config.environment
    key = section.cache_key()
    if key not in _ENVIRONMENTS:
        _ENVIRONMENTS[key] = build_environment(
            section.objective,
            dim=section.dim,
            points_per_dim=section.points_per_dim,
            lower=section.lower,
            upper=section.upper,
            normalize=section.normalize,
            noise_fraction=section.noise_fraction,
            noise_std=section.xi,
        )
    return _ENVIRONMENTS[key]


def resolve_lambda(config: ExperimentConfig, env: Environment) -> float:
    if config.regularization.mode is LambdaMode.EXPLICIT:
        return float(config.regularization.value)
    return _percentile_lambda(env.noise_stds())


def expand_tasks(config: ExperimentConfig, full_grid: bool = False) -> List[RunTask]:
    """Every (algorithm, combination, seed) of the config, sorted"""
    tasks = []
    for algorithm in config.algorithms:
        for params in config.combinations(algorithm, full_grid=full_grid):
            combo = combination_id(params)
            for seed in config.experiment.seeds:
                tasks.append(RunTask(algorithm.value, combo, seed, params))
    return sorted(tasks)


def _beta_schedule(
    config: ExperimentConfig,
    algorithm: AlgorithmName,
    params: Dict[str, float],
    env: Environment
) -> BetaSchedule:
    hp = config.hyperparameters
    scale = params.get("beta_scale", 1.0)
    if algorithm.uses_ei:
        return BetaSchedule.frequentist_ei(delta=hp.delta, scale=scale)
    if hp.beta_schedule == "frequentist":
        return BetaSchedule.frequentist_ucb(norm_bound=hp.F, delta=hp.delta, scale=scale)
    return BetaSchedule.bayesian_ucb(card=env.size, delta=hp.delta)


def execute_task(task: RunTask, config: ExperimentConfig, lam: float) -> RunResult:
    """
    Run one task. Module-level so worker processes can unpickle it.
    """
    env = get_environment(config)
    algorithm = AlgorithmName(task.algorithm)
    T = config.experiment.steps
    record_time = config.experiment.timing is TimingMode.WALL
    params = task.params

    if algorithm is AlgorithmName.UNIFORM:
        return run_uniform(env, T, task.seed, record_time=record_time)
    if algorithm is AlgorithmName.EPSILON_GREEDY:
        eps = EpsilonSchedule(a=params["a"], b=params["b"])
        return run_epsilon_greedy(env, eps, T, task.seed, record_time=record_time)

    kernel = KernelSpec.from_squared_bandwidth(params["bandwidth_squared"])
    schedule = _beta_schedule(config, algorithm, params, env)
    acquisition = AcquisitionKind.EI if algorithm.uses_ei else AcquisitionKind.UCB
    if algorithm.is_mini:
        return run_mini(
            env, kernel, schedule, lam, params["C"], T, task.seed,
            acquisition=acquisition,
            record_time=record_time,
            params=params,
        )
    return run_gp_ucb(
        env, kernel, schedule, lam, T, task.seed,
        acquisition=acquisition,
        record_time=record_time,
        params=params,
    )


def _execute_all(
    tasks: List[RunTask],
    config: ExperimentConfig,
    lam: float,
    workers: int
) -> List[RunResult]:
    if workers <= 1 or len(tasks) <= 1:
        return [execute_task(task, config, lam) for task in tasks]
    logger.info(f"Dispatching {len(tasks)} runs over {workers} worker processes")
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(execute_task, tasks, repeat(config), repeat(lam)))


def _check_switch_bounds(
    results: List[RunResult],
    params: Dict[str, float],
    lam: float,
    env: Environment
) -> List[Dict[str, float]]:
    if env.noise_std <= 0:
        logger.warning("Skipping switch-bound check: noise level is zero")
        return []
    checker = create_bound_checker(
        kernel=KernelSpec.from_squared_bandwidth(params["bandwidth_squared"]),
        lam=lam,
        xi=env.noise_std,
        C=params["C"],
    )
    return [checker.check_switches(r).to_dict() for r in results]


def run_experiment(
    config: ExperimentConfig,
    full_grid: bool = False,
    workers: Optional[int] = None,
    out_dir: Optional[Union[str, Path]] = None
) -> Manifest:
    """
    Execute every run of an experiment and write its outputs.

    Layout under out_dir:
        <algorithm>/<combination>/seed_<s>.csv
        <algorithm>/<combination>/summary.json
        report.json, manifest.json, plots/*.svg

    Args:
        config: Validated experiment config
        full_grid: Sweep every hyperparameter combination (else first values only)
        workers: Worker processes (defaults to GPOPT_DEFAULT_WORKERS)
        out_dir: Output root (defaults to config.output.dir)

    Returns:
        Manifest of written files
    """
    settings = get_settings()
    workers = settings.DEFAULT_WORKERS if workers is None else workers
    if workers < 1:
        raise UsageError(f"workers must be >= 1, got {workers}")
    root = Path(out_dir if out_dir is not None else config.output.dir)
    root.mkdir(parents=True, exist_ok=True)

    env = get_environment(config)
    lam = resolve_lambda(config, env)
    tasks = expand_tasks(config, full_grid=full_grid)
    logger.info(
        f"Experiment {config.experiment.name}: {len(tasks)} runs, T={config.experiment.steps}, "
        f"lambda={lam:.6g}, xi={env.noise_std:.6g}"
    )

    results = _execute_all(tasks, config, lam, workers)

    manifest = Manifest(
        experiment=config.experiment.name,
        out_dir=str(root),
        regularization=lam,
        noise_std=env.noise_std,
    )
    groups: Dict[Tuple[str, str], List[Tuple[RunTask, RunResult]]] = defaultdict(list)
    for task, result in zip(tasks, results):
        path = root / task.algorithm / task.combination / f"seed_{task.seed}.csv"
        write_step_csv(result, env, path)
        manifest.runs.append(ManifestEntry(
            algorithm=task.algorithm,
            combination=task.combination,
            params=task.params,
            seed=task.seed,
            csv=str(path.relative_to(root)),
        ))
        groups[(task.algorithm, task.combination)].append((task, result))

    summaries: List[SummaryTable] = []
    if len(config.experiment.seeds) < 2:
        logger.warning("Fewer than 2 seeds: skipping summaries, report and plots")
    else:
        for (algorithm, combo), members in sorted(groups.items()):
            params = members[0][0].params
            runs = [result for _, result in members]
            summary = summarize(runs, env, combination=combo, params=params)
            if AlgorithmName(algorithm).is_mini:
                summary.switch_bound = _check_switch_bounds(runs, params, lam, env)
            path = write_model_json(summary, root / algorithm / combo / "summary.json")
            manifest.summaries.append(str(path.relative_to(root)))
            summaries.append(summary)

        report = best_combinations(summaries, config.experiment.name, lam, env.noise_std)
        manifest.report = str(write_model_json(report, root / "report.json").relative_to(root))

        if config.output.plots:
            best = [
                s for s in summaries
                if report.best[s.algorithm].combination == s.combination
            ]
            plots = plot_summaries(best, root / "plots")
            manifest.plots = [str(p.relative_to(root)) for p in plots]

    write_model_json(manifest, root / "manifest.json")
    logger.info(f"Wrote {len(manifest.runs)} runs and {len(manifest.summaries)} summaries to {root}")
    return manifest


def best_combinations(
    summaries: List[SummaryTable],
    experiment: str,
    lam: float,
    noise_std: float
) -> ExperimentReport:
    """Pick the combination with the lowest mean final R_T / T per algorithm"""
    report = ExperimentReport(experiment=experiment, regularization=lam, noise_std=noise_std)
    for summary in summaries:
        current = report.best.get(summary.algorithm)
        if current is None or summary.final_average_regret < current.final["average_regret"]:
            report.best[summary.algorithm] = BestCombination(
                combination=summary.combination,
                params=summary.params,
                final=summary.final,
            )
    for algorithm, best in sorted(report.best.items()):
        logger.info(
            f"Best {algorithm}: {best.combination} "
            f"(R_T/T={best.final['average_regret']:.6g}, "
            f"normalized={best.final['normalized_average_regret']:.4f})"
        )
    return report
