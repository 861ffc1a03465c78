"""
Pytest configuration and fixtures for mini-gpopt tests.

This file is automatically loaded by pytest and provides:
- Custom markers
- Shared fixtures (grids, environments, randomized duplicated histories)
- Settings isolation
"""
import numpy as np
import pytest

from mini_gpopt.benchmarks import CandidateGrid, ObjectiveFamily, build_environment, build_grid
from mini_gpopt.config import reset_settings
from mini_gpopt.gp import Candidate, KernelSpec, UniqueHistory, history_add


def pytest_configure(config):
    """Configure custom markers."""
    config.addinivalue_line(
        "markers", "integration: End-to-end harness runs writing files"
    )
    config.addinivalue_line(
        "markers", "slow: Slow tests (>5 seconds), acceptance-scale runs"
    )
    config.addinivalue_line(
        "markers", "performance: Wall-clock and scaling measurements"
    )


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Drop cached settings around every test so GPOPT_* overrides stay local."""
    for key in ["GPOPT_LOG_LEVEL", "GPOPT_MAX_GRID_SIZE", "GPOPT_SCORING_CHUNK_SIZE",
                "GPOPT_VARIANCE_TOLERANCE", "GPOPT_DEFAULT_WORKERS", "GPOPT_DEFAULT_OUTPUT_DIR"]:
        monkeypatch.delenv(key, raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def kernel():
    return KernelSpec(bandwidth=1.0)


@pytest.fixture
def small_grid():
    """5 x 5 grid on [-2, 2]^2"""
    return build_grid(2, 5, lower=-2.0, upper=2.0)


@pytest.fixture
def line_grid():
    """Three points on a line"""
    return CandidateGrid.from_points([[0.0], [1.0], [2.0]])


@pytest.fixture
def small_env():
    """Normalized 2-D Ellipsoid on a 9 x 9 grid, xi = 1% of the range"""
    return build_environment(ObjectiveFamily.ELLIPSOID, dim=2, points_per_dim=9)


@pytest.fixture
def make_history():
    """
    Factory for random duplicated histories.

    Returns (history, expanded points, expanded feedback in evaluation order).
    """
    def factory(rng, t=30, q=8, dim=2):
        pool = rng.uniform(-2.0, 2.0, size=(q, dim))
        history = UniqueHistory.empty(dim)
        points, feedback = [], []
        picks = np.concatenate([np.arange(q), rng.integers(q, size=max(t - q, 0))])[:t]
        for index in picks:
            y = float(rng.normal())
            history = history_add(history, Candidate(int(index), pool[index]), [y])
            points.append(pool[index])
            feedback.append(y)
        return history, np.array(points), np.array(feedback)

    return factory
