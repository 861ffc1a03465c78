"""
Regret, information gain and cross-seed summaries over RunResults.
"""
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence
import logging

import numpy as np
from pydantic import BaseModel, Field

from .benchmarks.environment import Environment
from .errors import UsageError
from .gp.history import UniqueHistory
from .gp.kernel import KernelSpec
from .gp.posterior import posterior_fit
from .policies.results import RunResult

logger = logging.getLogger(__name__)

SUMMARY_SCHEMA_VERSION = 1
CI_METHOD = "normal-approximation: mean +/- 1.96 * sd / sqrt(n) over seeds"


@dataclass(frozen=True)
class RegretTrace:
    """
    Per-step regret of one run, computed on noiseless rewards.

    Attributes:
        instantaneous: r_t = f* - f(x_t)
        cumulative: R_t
        average: R_t / t
        normalized: average divided by the uniform policy's expected average regret
    """
    instantaneous: np.ndarray
    cumulative: np.ndarray
    average: np.ndarray
    normalized: np.ndarray


def compute_regret(result: RunResult, env: Environment) -> RegretTrace:
    """
    Regret trace of a run against the best grid candidate.

    Normalization uses the exact expected average regret of uniform random
    selection, f* - mean(f); a degenerate environment (all candidates equal)
    leaves the normalized trace at zero.
    """
    r = np.maximum(env.regret(result.chosen), 0.0)
    cumulative = np.cumsum(r)
    average = cumulative / np.arange(1, r.shape[0] + 1)
    baseline = env.uniform_average_regret()
    normalized = average / baseline if baseline > 0 else np.zeros_like(average)
    return RegretTrace(
        instantaneous=r,
        cumulative=cumulative,
        average=average,
        normalized=normalized,
    )


def info_gain(history: UniqueHistory, kernel: KernelSpec, xi: float) -> float:
    """
    gamma = 1/2 logdet(I + xi^-2 W^{1/2} K_h W^{1/2}).

    Equal to 1/2 logdet(I + xi^-2 K_t) on the expanded history.
    """
    if not xi > 0:
        raise UsageError(f"Noise level xi must be positive, got {xi}")
    if history.size == 0:
        return 0.0
    return 0.5 * posterior_fit(history, kernel, xi ** 2).logdet


class CurveSummary(BaseModel):
    """Per-step mean and 95% half-width across seeds"""
    mean: List[float]
    half_width: List[float]


class SummaryTable(BaseModel):
    """Cross-seed summary of one algorithm / hyperparameter combination"""
    schema_version: int = SUMMARY_SCHEMA_VERSION
    algorithm: str
    combination: str
    params: Dict[str, float] = Field(default_factory=dict)
    seeds: List[int]
    steps: int
    ci_method: str = CI_METHOD
    curves: Dict[str, CurveSummary]
    final: Dict[str, float]
    switch_bound: List[Dict[str, float]] = Field(default_factory=list)

    @property
    def final_average_regret(self) -> float:
        return self.final["average_regret"]


def _curve(rows: np.ndarray) -> CurveSummary:
    n = rows.shape[0]
    mean = rows.mean(axis=0)
    sd = rows.std(axis=0, ddof=1)
    return CurveSummary(
        mean=mean.tolist(),
        half_width=(1.96 * sd / np.sqrt(n)).tolist(),
    )


def summarize(
    results: Sequence[RunResult],
    env: Environment,
    combination: str = "",
    params: Optional[Dict[str, float]] = None
) -> SummaryTable:
    """
    Aggregate runs of one configuration across seeds.

    Produces per-step mean and 1.96 * sd / sqrt(n) half-widths for the
    normalized average regret, raw average regret, cumulative regret R_t,
    q_t, h_t and wall-clock.

    Raises:
        UsageError: With fewer than two runs or runs of different lengths
    """
    if len(results) < 2:
        raise UsageError(f"summarize needs at least 2 seeds, got {len(results)}")
    steps = {r.steps for r in results}
    if len(steps) != 1:
        raise UsageError(f"Runs have different lengths: {sorted(steps)}")

    regrets = [compute_regret(r, env) for r in results]
    normalized = np.stack([g.normalized for g in regrets])
    average = np.stack([g.average for g in regrets])
    cumulative = np.stack([g.cumulative for g in regrets])
    unique = np.stack([r.unique_counts for r in results]).astype(float)
    switches = np.stack([r.switch_counts for r in results]).astype(float)
    elapsed = np.stack([r.elapsed for r in results])

    curves = {
        "normalized_average_regret": _curve(normalized),
        "average_regret": _curve(average),
        "cumulative_regret": _curve(cumulative),
        "unique_count": _curve(unique),
        "switch_count": _curve(switches),
        "elapsed_seconds": _curve(elapsed),
    }
    final = {
        "normalized_average_regret": float(normalized[:, -1].mean()),
        "average_regret": float(average[:, -1].mean()),
        "cumulative_regret": float(cumulative[:, -1].mean()),
        "unique_count": float(unique[:, -1].mean()),
        "switch_count": float(switches[:, -1].mean()),
        "switch_gap": float((switches[:, -1] - unique[:, -1]).mean()),
        "elapsed_seconds": float(elapsed[:, -1].mean()),
    }
    first = results[0]
    return SummaryTable(
        algorithm=first.algorithm,
        combination=combination,
        params=dict(params or {}),
        seeds=[r.seed for r in results],
        steps=first.steps,
        curves=curves,
        final=final,
    )
