"""Kernels, unique-candidate histories and the weighted GP posterior"""

from .kernel import KAPPA_SQUARED, KernelFamily, KernelSpec, kernel_eval, kernel_matrix
from .history import Candidate, UniqueHistory, history_add
from .posterior import (
    PosteriorModel,
    log_det_weighted,
    naive_posterior,
    posterior_fit,
    posterior_mean,
    posterior_var,
)

__all__ = [
    "KAPPA_SQUARED",
    "KernelFamily",
    "KernelSpec",
    "kernel_eval",
    "kernel_matrix",
    "Candidate",
    "UniqueHistory",
    "history_add",
    "PosteriorModel",
    "log_det_weighted",
    "naive_posterior",
    "posterior_fit",
    "posterior_mean",
    "posterior_var",
]
