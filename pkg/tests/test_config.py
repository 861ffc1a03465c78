"""
Tests for process-level settings and experiment configuration files.
"""
import pytest
import yaml
from pydantic import ValidationError

from mini_gpopt.benchmarks import ObjectiveFamily
from mini_gpopt.config import GPOptSettings, get_settings, reset_settings
from mini_gpopt.errors import ConfigurationError
from mini_gpopt.harness import (
    AlgorithmName,
    ExperimentConfig,
    combination_id,
    default_experiment_config,
    load_experiment_config,
)
from mini_gpopt.harness.experiment import LambdaMode, TimingMode, parse_experiment_config


class TestSettings:
    """Test GPOPT_* environment settings."""

    def test_defaults(self):
        settings = get_settings()
        assert settings.LOG_LEVEL == "INFO"
        assert settings.VARIANCE_TOLERANCE == 1e-12
        assert settings.DEFAULT_WORKERS == 1

    def test_env_prefix(self, monkeypatch):
        monkeypatch.setenv("GPOPT_SCORING_CHUNK_SIZE", "128")
        monkeypatch.setenv("GPOPT_LOG_LEVEL", "debug")
        reset_settings()
        settings = get_settings()
        assert settings.SCORING_CHUNK_SIZE == 128
        assert settings.LOG_LEVEL == "DEBUG"

    def test_singleton(self):
        assert get_settings() is get_settings()

    def test_reset(self):
        first = get_settings()
        reset_settings()
        assert get_settings() is not first

    @pytest.mark.parametrize("name,value", [
        ("GPOPT_LOG_LEVEL", "LOUD"),
        ("GPOPT_MAX_GRID_SIZE", "0"),
        ("GPOPT_VARIANCE_TOLERANCE", "0.5"),
    ])
    def test_invalid_values(self, monkeypatch, name, value):
        monkeypatch.setenv(name, value)
        with pytest.raises(ValidationError):
            GPOptSettings()

    def test_to_dict(self):
        assert "MAX_GRID_SIZE" in get_settings().to_dict()


class TestExperimentConfig:
    """Test experiment parsing and hyperparameter grids."""

    def test_defaults(self):
        config = ExperimentConfig()
        assert config.experiment.steps == 2000
        assert config.experiment.seeds == list(range(40))
        assert config.regularization.mode is LambdaMode.ORACLE

    def test_twenty_combinations_per_mini_algorithm(self):
        config = ExperimentConfig()
        for algorithm in [AlgorithmName.MINI_GP_UCB, AlgorithmName.MINI_GP_EI]:
            assert len(config.combinations(algorithm)) == 20

    def test_combination_axes(self):
        config = ExperimentConfig()
        assert len(config.combinations(AlgorithmName.GP_UCB)) == 10
        assert len(config.combinations(AlgorithmName.EPSILON_GREEDY)) == 12
        assert config.combinations(AlgorithmName.UNIFORM) == [{}]

    def test_first_values_only(self):
        combos = ExperimentConfig().combinations(AlgorithmName.MINI_GP_UCB, full_grid=False)
        assert combos == [{"bandwidth_squared": 100.0, "C": 1.1}]

    def test_frequentist_schedule_searches_scale(self):
        config = parse_experiment_config({
            "hyperparameters": {"beta_schedule": "frequentist", "beta_scale": [0.5, 1.0]},
        })
        assert len(config.combinations(AlgorithmName.MINI_GP_UCB)) == 40

    def test_single_algorithm_string(self):
        config = parse_experiment_config({"algorithms": "uniform"})
        assert config.algorithms == [AlgorithmName.UNIFORM]

    @pytest.mark.parametrize("data", [
        {"experiment": {"steps": 0}},
        {"experiment": {"seeds": [1, 1]}},
        {"experiment": {"seeds": []}},
        {"hyperparameters": {"C": [1.0]}},
        {"hyperparameters": {"bandwidth_squared": []}},
        {"algorithms": ["simulated-annealing"]},
        {"regularization": {"mode": "explicit"}},
        {"environment": {"lower": 1.0, "upper": 0.0}},
    ])
    def test_invalid(self, data):
        with pytest.raises(ValidationError):
            parse_experiment_config(data)

    def test_non_mapping(self):
        with pytest.raises(ConfigurationError):
            parse_experiment_config(["uniform"])

    def test_combination_id(self):
        assert combination_id({}) == "default"
        assert combination_id({"C": 1.1, "bandwidth_squared": 144.45}) == "C=1.1_bandwidth_squared=144.45"

    def test_load_yaml(self, tmp_path):
        path = tmp_path / "exp.yaml"
        path.write_text(yaml.safe_dump({
            "experiment": {"name": "tiny", "steps": 50, "seeds": [0, 1], "timing": "off"},
            "environment": {"objective": "rastrigin", "dim": 2, "points_per_dim": 5},
            "algorithms": ["uniform", "gp-ucb"],
        }))
        config = load_experiment_config(path)
        assert config.experiment.timing is TimingMode.OFF
        assert config.environment.objective is ObjectiveFamily.RASTRIGIN
        assert config.algorithms == [AlgorithmName.UNIFORM, AlgorithmName.GP_UCB]

    def test_load_empty_file(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("")
        assert load_experiment_config(path) == ExperimentConfig()

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_experiment_config(tmp_path / "missing.yaml")

    def test_shipped_default(self):
        config = default_experiment_config()
        assert config.environment.dim == 3
        assert config.environment.points_per_dim == 22
        assert len(config.experiment.seeds) == 40
        assert set(config.algorithms) == {
            AlgorithmName.MINI_GP_UCB,
            AlgorithmName.MINI_GP_EI,
            AlgorithmName.GP_UCB,
            AlgorithmName.EPSILON_GREEDY,
            AlgorithmName.UNIFORM,
        }
        assert config.hyperparameters.C == [1.1, 1.2]
