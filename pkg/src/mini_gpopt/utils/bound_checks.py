"""
Run-level invariant checks for the low-switching loop.
Validates finished runs against the switch-count bound and the within-batch
variance-ratio guarantee.
"""
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Tuple
import logging

import numpy as np

from ..benchmarks.grid import CandidateGrid
from ..errors import UsageError
from ..gp.history import UniqueHistory, history_add
from ..gp.kernel import KernelSpec
from ..gp.posterior import posterior_fit
from ..metrics import info_gain
from ..policies.results import RunResult

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SwitchBoundReport:
    """Outcome of the switch-count check for one run"""
    seed: int
    epochs: int
    unique: int
    gamma: float
    bound: float
    within_bound: bool
    unique_within_epochs: bool

    @property
    def passed(self) -> bool:
        return self.within_bound and self.unique_within_epochs

    def to_dict(self) -> Dict[str, float]:
        return {k: float(v) for k, v in asdict(self).items()}


@dataclass(frozen=True)
class EpochRatio:
    """Largest posterior-std ratio observed inside one batch"""
    epoch_index: int
    batch_length: int
    max_ratio: float


def switch_bound(C: float, lam: float, gamma: float, kappa_squared: float = 1.0) -> float:
    """h <= 4 C^2 / (C^2 - 1) * (1 + kappa^2 / lambda) * gamma_T"""
    return 4.0 * C ** 2 / (C ** 2 - 1.0) * (1.0 + kappa_squared / lam) * gamma


class BoundChecker:
    """
    Invariant validation for finished GP runs.

    Checks:
    - number of epochs against the information-gain switch bound
    - unique candidates never exceed epochs
    - posterior std ratio inside every unclamped batch stays below C
    """

    def __init__(self, kernel: KernelSpec, lam: float, xi: float, C: float):
        self.kernel = kernel
        self.lam = lam
        self.xi = xi
        self.C = C

    def check_switches(self, result: RunResult) -> SwitchBoundReport:
        """
        Check h <= bound(gamma_T) and q_T <= h for one run.

        gamma_T is computed on the realized history with xi^2 in place of lambda.
        Failures are logged as warnings, not raised.
        """
        if result.history is None:
            raise UsageError(f"{result.algorithm} runs carry no GP history to check")
        gamma = info_gain(result.history, self.kernel, self.xi)
        bound = switch_bound(self.C, self.lam, gamma, self.kernel.kappa_squared)
        h = result.num_epochs
        q = result.final_unique_count
        report = SwitchBoundReport(
            seed=result.seed,
            epochs=h,
            unique=q,
            gamma=gamma,
            bound=bound,
            within_bound=h <= bound,
            unique_within_epochs=q <= h,
        )
        if not report.passed:
            logger.warning(
                f"Switch bound check failed for {result.algorithm} seed={result.seed}: "
                f"h={h}, q={q}, bound={bound:.4g} (gamma={gamma:.4g})"
            )
        return report

    def validate_switches(self, result: RunResult) -> Tuple[bool, Optional[str]]:
        """
        Returns:
            Tuple of (is_valid, error_message); error_message is None when valid
        """
        report = self.check_switches(result)
        if report.passed:
            return True, None
        if not report.unique_within_epochs:
            return False, f"{report.unique} unique candidates exceed {report.epochs} epochs"
        return False, f"{report.epochs} epochs exceed the bound {report.bound:.4g}"

    def batch_ratios(
        self,
        result: RunResult,
        grid: CandidateGrid,
        probes: np.ndarray
    ) -> List[EpochRatio]:
        """
        Recompute sigma_{t_h}(x) / sigma_{t'}(x) for every step t' of every
        unclamped batch by refitting on the truncated history.
        """
        return within_batch_ratios(result, grid, self.kernel, self.lam, probes)


def check_switch_bound(
    result: RunResult,
    kernel: KernelSpec,
    lam: float,
    xi: float,
    C: float
) -> SwitchBoundReport:
    """One-off switch-bound check without keeping a checker around"""
    return BoundChecker(kernel=kernel, lam=lam, xi=xi, C=C).check_switches(result)


def within_batch_ratios(
    result: RunResult,
    grid: CandidateGrid,
    kernel: KernelSpec,
    lam: float,
    probes: np.ndarray
) -> List[EpochRatio]:
    """
    Largest std ratio between the start of each unclamped batch and any later
    step of the same batch, over the probe points.

    Feedback values do not enter posterior variances, so the truncated
    histories are rebuilt from the epoch traces alone.
    """
    probes = np.atleast_2d(np.asarray(probes, dtype=float))
    history = UniqueHistory.empty(grid.dim)
    out = []
    for epoch in result.epochs:
        candidate = grid.candidate(epoch.candidate_index)
        if not epoch.clamped and epoch.batch_length > 1:
            base_std = np.sqrt(posterior_fit(history, kernel, lam).predict(probes)[1])
            worst = 1.0
            for s in range(1, epoch.batch_length + 1):
                partial = history_add(history, candidate, [0.0] * s)
                std = np.sqrt(posterior_fit(partial, kernel, lam).predict(probes)[1])
                worst = max(worst, float(np.max(base_std / std)))
            out.append(EpochRatio(epoch.epoch_index, epoch.batch_length, worst))
        history = history_add(history, candidate, [0.0] * epoch.batch_length)
    return out


def create_bound_checker(kernel: KernelSpec, lam: float, xi: float, C: float) -> BoundChecker:
    """
    Create a BoundChecker for one hyperparameter combination.

    Args:
        kernel: Kernel the runs used
        lam: Regularization the runs used
        xi: Noise level for the information gain
        C: Switching threshold

    Returns:
        BoundChecker instance
    """
    return BoundChecker(kernel=kernel, lam=lam, xi=xi, C=C)
