"""
Comparator policies: sequential GP-UCB / GP-EI, epsilon-greedy, uniform random.
"""
from dataclasses import dataclass
from typing import Any, Dict, Optional
import logging
import time

import numpy as np

from ..benchmarks.environment import Environment
from ..errors import ConfigurationError
from ..gp.kernel import KernelSpec
from .acquisition import AcquisitionKind, BetaSchedule
from .mini_meta import run_epochs, single_step_rule
from .results import RunResult, unique_count_trace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EpsilonSchedule:
    """Exploration rate eps_t = min(1, a / t^b)"""
    a: float
    b: float

    def __post_init__(self):
        if not self.a > 0:
            raise ConfigurationError(f"epsilon a must be positive, got {self.a}")
        if not self.b > 0:
            raise ConfigurationError(f"epsilon b must be positive, got {self.b}")

    def epsilon(self, t: int) -> float:
        return min(1.0, self.a / t ** self.b)


def run_gp_ucb(
    env: Environment,
    kernel: KernelSpec,
    schedule: BetaSchedule,
    lam: float,
    T: int,
    seed: int,
    acquisition: AcquisitionKind = AcquisitionKind.UCB,
    record_time: bool = True,
    params: Optional[Dict[str, Any]] = None
) -> RunResult:
    """
    Sequential optimistic GP optimization: refit and reselect every step.

    Duplicate selections still merge in the unique-candidate history, so each
    refit costs O(q_t^3). With acquisition=EI this is sequential GP-EI.
    """
    acquisition = AcquisitionKind(acquisition)
    name = "gp-ucb" if acquisition is AcquisitionKind.UCB else "gp-ei"
    run_params = {"bandwidth": kernel.bandwidth, "lambda": lam}
    run_params.update(params or {})
    return run_epochs(
        env,
        kernel,
        schedule,
        lam,
        T,
        seed,
        batch_rule=single_step_rule,
        acquisition=acquisition,
        algorithm=name,
        params=run_params,
        record_time=record_time,
    )


def _finish(
    algorithm: str,
    seed: int,
    params: Dict[str, Any],
    chosen: np.ndarray,
    rewards: np.ndarray,
    elapsed: np.ndarray
) -> RunResult:
    T = chosen.shape[0]
    return RunResult(
        algorithm=algorithm,
        seed=seed,
        params=params,
        chosen=chosen,
        rewards=rewards,
        epoch_of_step=np.arange(1, T + 1, dtype=np.int64),
        unique_counts=unique_count_trace(chosen),
        elapsed=elapsed,
    )


def run_epsilon_greedy(
    env: Environment,
    eps: EpsilonSchedule,
    T: int,
    seed: int,
    record_time: bool = True
) -> RunResult:
    """
    Epsilon-greedy over empirical mean rewards.

    At step t a uniform draw u decides: explore when u < eps_t or nothing has
    been evaluated yet (uniform candidate), otherwise exploit the evaluated
    candidate with the highest empirical mean (lowest index among ties).
    """
    if T < 1:
        raise ConfigurationError(f"Step budget T must be >= 1, got {T}")
    rng = np.random.default_rng(seed)
    n = env.size
    sums = np.zeros(n, dtype=float)
    counts = np.zeros(n, dtype=np.int64)
    chosen = np.empty(T, dtype=np.int64)
    rewards = np.empty(T, dtype=float)
    elapsed = np.zeros(T, dtype=float)

    start = time.perf_counter()
    for s in range(T):
        t = s + 1
        explore = rng.random() < eps.epsilon(t) or s == 0
        if explore:
            index = int(rng.integers(n))
        else:
            means = np.full(n, -np.inf)
            evaluated = counts > 0
            means[evaluated] = sums[evaluated] / counts[evaluated]
            index = int(np.argmax(means))

        y = env.evaluate(index, rng)
        sums[index] += y
        counts[index] += 1
        chosen[s] = index
        rewards[s] = y
        if record_time:
            elapsed[s] = time.perf_counter() - start

    logger.info(f"Finished epsilon-greedy (seed={seed}, a={eps.a}, b={eps.b})")
    return _finish("epsilon-greedy", seed, {"a": eps.a, "b": eps.b}, chosen, rewards, elapsed)


def run_uniform(env: Environment, T: int, seed: int, record_time: bool = True) -> RunResult:
    """Select candidates uniformly at random, i.i.d. across steps"""
    if T < 1:
        raise ConfigurationError(f"Step budget T must be >= 1, got {T}")
    rng = np.random.default_rng(seed)
    n = env.size
    chosen = np.empty(T, dtype=np.int64)
    rewards = np.empty(T, dtype=float)
    elapsed = np.zeros(T, dtype=float)

    start = time.perf_counter()
    for s in range(T):
        index = int(rng.integers(n))
        chosen[s] = index
        rewards[s] = env.evaluate(index, rng)
        if record_time:
            elapsed[s] = time.perf_counter() - start

    logger.info(f"Finished uniform (seed={seed})")
    return _finish("uniform", seed, {}, chosen, rewards, elapsed)
