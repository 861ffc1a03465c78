"""Numerical helpers and run-level invariant checks"""

from .linalg import (
    cholesky_lower,
    cholesky_solve,
    forward_solve,
    logdet_from_cholesky,
)

# bound_checks depends on the posterior and metrics modules, import it directly:
#   from mini_gpopt.utils.bound_checks import BoundChecker

__all__ = [
    "cholesky_lower",
    "cholesky_solve",
    "forward_solve",
    "logdet_from_cholesky",
]
