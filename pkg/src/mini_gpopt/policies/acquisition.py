"""
Acquisition scores, exploration schedules and exact maximization over a
finite candidate set.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple
import logging
import math

import numpy as np
from scipy.stats import norm

from ..config import get_settings
from ..errors import ConfigurationError, UsageError
from ..gp.history import Candidate
from ..gp.posterior import PosteriorModel

logger = logging.getLogger(__name__)


class BetaVariant(str, Enum):
    """Exploration schedules"""
    FREQUENTIST_UCB = "frequentist-ucb"
    BAYESIAN_UCB = "bayesian-ucb"
    FREQUENTIST_EI = "frequentist-ei"


class AcquisitionKind(str, Enum):
    """Acquisition functions"""
    UCB = "ucb"
    EI = "ei"


@dataclass(frozen=True)
class BetaSchedule:
    """
    Exploration multiplier schedule.

    Attributes:
        variant: Which schedule to evaluate
        delta: Confidence parameter in (0, 1)
        norm_bound: F, bound on the RKHS norm (frequentist UCB only)
        card: |A|, candidate-set size (Bayesian UCB only)
        scale: Multiplier standing in for the unspecified order constant
    """
    variant: BetaVariant
    delta: float = 0.1
    norm_bound: float = 1.0
    card: int = 1
    scale: float = 1.0

    def __post_init__(self):
        if not isinstance(self.variant, BetaVariant):
            object.__setattr__(self, "variant", BetaVariant(self.variant))
        if not 0 < self.delta < 1:
            raise ConfigurationError(f"delta must be in (0, 1), got {self.delta}")
        if self.norm_bound < 0:
            raise ConfigurationError(f"Norm bound F must be >= 0, got {self.norm_bound}")
        if self.card < 1:
            raise ConfigurationError(f"Candidate-set size must be >= 1, got {self.card}")
        if not self.scale > 0:
            raise ConfigurationError(f"beta scale must be positive, got {self.scale}")

    @classmethod
    def frequentist_ucb(cls, norm_bound: float, delta: float, scale: float = 1.0):
        return cls(BetaVariant.FREQUENTIST_UCB, delta=delta, norm_bound=norm_bound, scale=scale)

    @classmethod
    def bayesian_ucb(cls, card: int, delta: float):
        return cls(BetaVariant.BAYESIAN_UCB, delta=delta, card=card)

    @classmethod
    def frequentist_ei(cls, delta: float, scale: float = 1.0):
        return cls(BetaVariant.FREQUENTIST_EI, delta=delta, scale=scale)


def beta_value(schedule: BetaSchedule, logdet: float, t: int) -> float:
    """
    Evaluate the exploration multiplier.

    Args:
        schedule: Schedule to evaluate
        logdet: log_det_weighted of the most recent fit (>= 0)
        t: Index of the step being decided (>= 1)

    Returns:
        beta > 0
    """
    if t < 1:
        raise UsageError(f"Step index must be >= 1, got {t}")
    logdet = max(float(logdet), 0.0)
    delta = schedule.delta

    if schedule.variant is BetaVariant.FREQUENTIST_UCB:
        return schedule.scale * (math.sqrt(logdet + math.log(1.0 / delta)) + schedule.norm_bound)

    if schedule.variant is BetaVariant.BAYESIAN_UCB:
        return math.sqrt(2.0 * math.log(schedule.card * t ** 2 * math.pi ** 2 / (6.0 * delta)))

    log_td = math.log(t / delta)
    return schedule.scale * math.sqrt(logdet + math.sqrt(logdet * log_td) + log_td)


def ucb_score(mean, std, beta: float):
    """mu + beta * sigma"""
    return np.asarray(mean, dtype=float) + beta * np.asarray(std, dtype=float)


def ei_score(mean, std, beta: float, incumbent_mean: float):
    """
    Expected-improvement score with exploration multiplier beta.

        z = (mu - incumbent) / sigma
        u = beta * sigma * [(z / beta) Phi(z / beta) + phi(z / beta)]

    Where sigma = 0 the score is max(mu - incumbent, 0). Works element-wise on arrays.
    """
    mean = np.asarray(mean, dtype=float)
    std = np.asarray(std, dtype=float)
    improvement = mean - incumbent_mean
    positive = std > 0
    safe_std = np.where(positive, std, 1.0)
    u = improvement / (safe_std * beta)
    score = beta * safe_std * (u * norm.cdf(u) + norm.pdf(u))
    score = np.where(positive, score, np.maximum(improvement, 0.0))
    return np.maximum(score, 0.0)


def select_candidate(
    candidates,
    model: PosteriorModel,
    schedule: BetaSchedule,
    t: int,
    acquisition: AcquisitionKind = AcquisitionKind.UCB,
    chunk_size: Optional[int] = None
) -> Tuple[Candidate, float]:
    """
    Exactly maximize the acquisition over a finite candidate set.

    Candidates are scored in blocks of `chunk_size`; ties resolve to the lowest
    candidate index regardless of blocking. For EI the incumbent is the largest
    posterior mean over all candidates, found before any scoring.

    Args:
        candidates: CandidateGrid (or anything with `coordinates` and `candidate(i)`)
        model: Fitted posterior
        schedule: Exploration schedule
        t: Index of the step being decided
        acquisition: UCB or EI
        chunk_size: Block size (defaults to SCORING_CHUNK_SIZE)

    Returns:
        (selected candidate, posterior variance at it)
    """
    coords = candidates.coordinates
    n = coords.shape[0]
    if n == 0:
        raise UsageError("Candidate set is empty")
    chunk_size = chunk_size or get_settings().SCORING_CHUNK_SIZE
    beta = beta_value(schedule, model.logdet, t)

    means = np.empty(n, dtype=float)
    variances = np.empty(n, dtype=float)
    for start in range(0, n, chunk_size):
        stop = min(start + chunk_size, n)
        means[start:stop], variances[start:stop] = model.predict(coords[start:stop])

    stds = np.sqrt(variances)
    if AcquisitionKind(acquisition) is AcquisitionKind.UCB:
        scores = ucb_score(means, stds, beta)
    else:
        scores = ei_score(means, stds, beta, float(means.max()))

    # np.argmax returns the first maximizer, i.e. the lowest index
    best = int(np.argmax(scores))
    logger.debug(
        f"t={t} selected {best} score={scores[best]:.6g} beta={beta:.4g} "
        f"mean={means[best]:.6g} var={variances[best]:.3e}"
    )
    return candidates.candidate(best), float(variances[best])
