"""
Low-switching epoch loop.

Each epoch fits the posterior once, picks the acquisition maximizer, and
commits to evaluating it B_h = floor((C^2 - 1) lambda / sigma^2) times before any of
the new feedback is used. Keeping the posterior variance ratio inside a batch
below C bounds the number of epochs by the information gain, so the posterior
only ever has to be maintained over a few unique candidates.
"""
from enum import Enum
from typing import Any, Callable, Dict, Optional, Tuple
import logging
import math
import time

import numpy as np

from ..benchmarks.environment import Environment
from ..errors import ConfigurationError, UsageError
from ..gp.history import UniqueHistory, history_add
from ..gp.kernel import KernelSpec
from ..gp.posterior import posterior_fit
from .acquisition import AcquisitionKind, BetaSchedule, beta_value, select_candidate
from .results import EpochTrace, RunResult

logger = logging.getLogger(__name__)

# (variance at selection, remaining budget) -> (batch length, clamped to 1)
BatchRule = Callable[[float, int], Tuple[int, bool]]


class FeedbackDelivery(str, Enum):
    """When the rewards of a batch are drawn"""
    PER_STEP = "per_step"  # drawn as each step executes
    EPOCH_END = "epoch_end"  # noise for the whole batch pre-drawn in step order


def _raw_batch_length(variance: float, C: float) -> float:
    if variance == 0:
        return math.inf
    return math.floor((C * C - 1.0) / variance)


def batch_length(variance: float, C: float, remaining_budget: int) -> int:
    """
    Number of times the selected candidate is evaluated.

        min(remaining_budget, max(1, floor((C^2 - 1) / variance)))

    Args:
        variance: Posterior variance at the selected candidate
        C: Switching threshold (> 1)
        remaining_budget: Steps left in the run (>= 1)

    Raises:
        ConfigurationError: If C <= 1
        UsageError: On negative variance or an exhausted budget
    """
    if not C > 1:
        raise ConfigurationError(f"Switching threshold C must be > 1, got {C}")
    if variance < 0:
        raise UsageError(f"Variance must be non-negative, got {variance}")
    if remaining_budget < 1:
        raise UsageError(f"Remaining budget must be >= 1, got {remaining_budget}")
    raw = _raw_batch_length(variance, C)
    return int(min(remaining_budget, max(1, raw)))


def threshold_batch_rule(C: float, lam: float = 1.0) -> BatchRule:
    """
    Batch rule of the low-switching loop.

    The variance is measured in units of lambda, sigma^2 / lambda, which is the
    scale the within-batch ratio bound sigma_start / sigma_t <= C holds on.
    With lam = 1 this is floor((C^2 - 1) / sigma^2) verbatim.
    """
    if not C > 1:
        raise ConfigurationError(f"Switching threshold C must be > 1, got {C}")
    if not lam > 0:
        raise ConfigurationError(f"Regularization lambda must be positive, got {lam}")

    def rule(variance: float, remaining: int) -> Tuple[int, bool]:
        scaled = variance / lam
        return batch_length(scaled, C, remaining), _raw_batch_length(scaled, C) < 1

    return rule


def single_step_rule(variance: float, remaining: int) -> Tuple[int, bool]:
    """Sequential policies evaluate every selection once"""
    return 1, False


def run_epochs(
    env: Environment,
    kernel: KernelSpec,
    schedule: BetaSchedule,
    lam: float,
    T: int,
    seed: int,
    batch_rule: BatchRule,
    acquisition: AcquisitionKind = AcquisitionKind.UCB,
    algorithm: str = "mini-gp-ucb",
    params: Optional[Dict[str, Any]] = None,
    feedback_delivery: FeedbackDelivery = FeedbackDelivery.PER_STEP,
    record_time: bool = True
) -> RunResult:
    """
    Generic fit -> select -> batch -> evaluate -> merge loop.

    Within an epoch neither the posterior nor the acquisition sees any of the
    batch's feedback; it is merged into the history once, at epoch end.

    Returns:
        RunResult with one EpochTrace per epoch
    """
    if T < 1:
        raise ConfigurationError(f"Step budget T must be >= 1, got {T}")
    delivery = FeedbackDelivery(feedback_delivery)

    rng = np.random.default_rng(seed)
    history = UniqueHistory.empty(env.grid.dim)
    chosen = np.empty(T, dtype=np.int64)
    rewards = np.empty(T, dtype=float)
    epoch_of_step = np.empty(T, dtype=np.int64)
    unique_counts = np.empty(T, dtype=np.int64)
    elapsed = np.zeros(T, dtype=float)
    epochs = []

    logger.info(
        f"Starting {algorithm} (seed={seed}, T={T}, lambda={lam:.4g}, "
        f"bandwidth={kernel.bandwidth:.4g}) on {env.size} candidates"
    )

    t = 0
    start = time.perf_counter()
    while t < T:
        h = len(epochs) + 1
        model = posterior_fit(history, kernel, lam)
        candidate, variance = select_candidate(env.grid, model, schedule, t + 1, acquisition)
        beta = beta_value(schedule, model.logdet, t + 1)
        B, clamped = batch_rule(variance, T - t)

        if delivery is FeedbackDelivery.PER_STEP:
            feedbacks = []
            for s in range(t, t + B):
                feedbacks.append(env.evaluate(candidate.index, rng))
                if record_time:
                    elapsed[s] = time.perf_counter() - start
        else:
            feedbacks = env.evaluate_block(candidate.index, rng, B)
            if record_time:
                elapsed[t:t + B] = time.perf_counter() - start

        history = history_add(history, candidate, feedbacks)
        chosen[t:t + B] = candidate.index
        rewards[t:t + B] = feedbacks
        epoch_of_step[t:t + B] = h
        unique_counts[t:t + B] = history.size

        epochs.append(EpochTrace(
            epoch_index=h,
            candidate_index=candidate.index,
            batch_length=B,
            start_step=t + 1,
            variance_at_selection=variance,
            beta_used=beta,
            logdet_at_fit=model.logdet,
            regularization=float(lam),
            clamped=clamped,
        ))
        logger.debug(
            f"epoch {h}: candidate={candidate.index} B={B} var={variance:.3e} "
            f"beta={beta:.4g} q={history.size}"
        )
        t += B

    logger.info(
        f"Finished {algorithm} (seed={seed}): {len(epochs)} epochs, "
        f"{history.size} unique candidates, {elapsed[-1]:.2f}s"
    )
    return RunResult(
        algorithm=algorithm,
        seed=seed,
        params=dict(params or {}),
        chosen=chosen,
        rewards=rewards,
        epoch_of_step=epoch_of_step,
        unique_counts=unique_counts,
        elapsed=elapsed,
        epochs=epochs,
        history=history,
    )


def run_mini(
    env: Environment,
    kernel: KernelSpec,
    schedule: BetaSchedule,
    lam: float,
    C: float,
    T: int,
    seed: int,
    acquisition: AcquisitionKind = AcquisitionKind.UCB,
    feedback_delivery: FeedbackDelivery = FeedbackDelivery.PER_STEP,
    record_time: bool = True,
    params: Optional[Dict[str, Any]] = None
) -> RunResult:
    """
    Run the low-switching meta-algorithm (mini-GP-UCB / mini-GP-EI).

    Args:
        env: Environment to optimize
        kernel: Kernel specification
        schedule: Exploration schedule
        lam: Regularization lambda
        C: Switching threshold (> 1)
        T: Step budget
        seed: Seed of the run's single generator
        acquisition: UCB or EI
        feedback_delivery: per_step or epoch_end; both yield identical results
        record_time: Measure wall-clock per step (zeros otherwise)
        params: Hyperparameters echoed into the result

    Returns:
        RunResult
    """
    acquisition = AcquisitionKind(acquisition)
    name = "mini-gp-ucb" if acquisition is AcquisitionKind.UCB else "mini-gp-ei"
    run_params = {"C": C, "bandwidth": kernel.bandwidth, "lambda": lam}
    run_params.update(params or {})
    return run_epochs(
        env,
        kernel,
        schedule,
        lam,
        T,
        seed,
        batch_rule=threshold_batch_rule(C, lam),
        acquisition=acquisition,
        algorithm=name,
        params=run_params,
        feedback_delivery=feedback_delivery,
        record_time=record_time,
    )
