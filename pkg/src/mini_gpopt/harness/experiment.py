"""
Experiment configuration.
Parses and validates YAML experiment files into typed models.
"""
from enum import Enum
from importlib import resources
from itertools import product
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union
import logging

import yaml
from pydantic import BaseModel, Field, field_validator, model_validator

from ..benchmarks.objectives import ObjectiveFamily
from ..errors import ConfigurationError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_RESOURCE = "default_experiment.yaml"


class AlgorithmName(str, Enum):
    """Policies the harness can run"""
    MINI_GP_UCB = "mini-gp-ucb"
    MINI_GP_EI = "mini-gp-ei"
    GP_UCB = "gp-ucb"
    GP_EI = "gp-ei"
    EPSILON_GREEDY = "epsilon-greedy"
    UNIFORM = "uniform"

    @property
    def is_gp(self) -> bool:
        return self is not AlgorithmName.EPSILON_GREEDY and self is not AlgorithmName.UNIFORM

    @property
    def is_mini(self) -> bool:
        return self in (AlgorithmName.MINI_GP_UCB, AlgorithmName.MINI_GP_EI)

    @property
    def uses_ei(self) -> bool:
        return self in (AlgorithmName.MINI_GP_EI, AlgorithmName.GP_EI)


class TimingMode(str, Enum):
    """How elapsed_seconds is recorded"""
    WALL = "wall"  # monotonic clock
    OFF = "off"  # zeros, for byte-identical reruns


class LambdaMode(str, Enum):
    """How the regularization lambda is chosen"""
    ORACLE = "oracle"
    EXPLICIT = "explicit"


class ExperimentSection(BaseModel):
    """Run budget and seeds"""
    name: str = "experiment"
    steps: int = Field(default=2000, ge=1, description="Step budget T")
    seeds: List[int] = Field(default_factory=lambda: list(range(40)))
    timing: TimingMode = TimingMode.WALL

    @field_validator("seeds")
    @classmethod
    def validate_seeds(cls, v: List[int]) -> List[int]:
        """Seeds must be non-empty and distinct"""
        if not v:
            raise ValueError("at least one seed is required")
        if len(set(v)) != len(v):
            raise ValueError("seeds must be distinct")
        return v


class EnvironmentSection(BaseModel):
    """Candidate grid and objective"""
    objective: ObjectiveFamily = ObjectiveFamily.ELLIPSOID
    dim: int = Field(default=3, ge=1)
    points_per_dim: int = Field(default=22, ge=2)
    lower: float = -5.0
    upper: float = 5.0
    normalize: bool = True
    noise_fraction: float = Field(default=0.01, ge=0)
    xi: Optional[float] = Field(default=None, ge=0, description="Explicit noise std")

    @model_validator(mode="after")
    def validate_bounds(self) -> "EnvironmentSection":
        if self.lower >= self.upper:
            raise ValueError("lower must be below upper")
        return self

    def cache_key(self) -> str:
        return self.model_dump_json()


class HyperparameterSection(BaseModel):
    """Hyperparameter grids searched per algorithm"""
    bandwidth_squared: List[float] = Field(
        default_factory=lambda: [100.0, 144.45, 188.89, 233.33, 277.78,
                                 322.22, 366.67, 411.11, 455.56, 500.0]
    )
    C: List[float] = Field(default_factory=lambda: [1.1, 1.2])
    beta_scale: List[float] = Field(default_factory=lambda: [1.0])
    beta_schedule: Literal["bayesian", "frequentist"] = "bayesian"
    delta: float = Field(default=0.1, gt=0, lt=1)
    F: float = Field(default=1.0, ge=0)
    epsilon_a: List[float] = Field(default_factory=lambda: [0.1, 1.0, 10.0])
    epsilon_b: List[float] = Field(default_factory=lambda: [1 / 3, 0.5, 1.0, 2.0])

    @field_validator("bandwidth_squared", "beta_scale", "epsilon_a", "epsilon_b")
    @classmethod
    def validate_positive_grid(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("hyperparameter grids must be non-empty")
        if any(x <= 0 for x in v):
            raise ValueError("hyperparameter values must be positive")
        return v

    @field_validator("C")
    @classmethod
    def validate_threshold_grid(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("C grid must be non-empty")
        if any(c <= 1 for c in v):
            raise ValueError("every C must be > 1")
        return v


class RegularizationSection(BaseModel):
    """Lambda selection"""
    mode: LambdaMode = LambdaMode.ORACLE
    value: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def validate_value(self) -> "RegularizationSection":
        if self.mode is LambdaMode.EXPLICIT and self.value is None:
            raise ValueError("explicit regularization requires a value")
        return self


class OutputSection(BaseModel):
    dir: str = "results"
    plots: bool = True


class ExperimentConfig(BaseModel):
    """Complete experiment description"""
    experiment: ExperimentSection = Field(default_factory=ExperimentSection)
    environment: EnvironmentSection = Field(default_factory=EnvironmentSection)
    algorithms: List[AlgorithmName] = Field(
        default_factory=lambda: [AlgorithmName.MINI_GP_UCB]
    )
    hyperparameters: HyperparameterSection = Field(default_factory=HyperparameterSection)
    regularization: RegularizationSection = Field(default_factory=RegularizationSection)
    output: OutputSection = Field(default_factory=OutputSection)

    @field_validator("algorithms", mode="before")
    @classmethod
    def validate_algorithms(cls, v: Union[str, List[str]]) -> List[str]:
        """Accept a single algorithm name or a list"""
        if isinstance(v, str):
            v = [v]
        if not v:
            raise ValueError("at least one algorithm is required")
        return v

    def combinations(
        self,
        algorithm: AlgorithmName,
        full_grid: bool = True
    ) -> List[Dict[str, float]]:
        """
        Hyperparameter combinations for one algorithm.

        Args:
            algorithm: Policy
            full_grid: Cartesian product of every grid; otherwise the first value of each

        Returns:
            List of parameter dictionaries in grid order
        """
        hp = self.hyperparameters
        pick = (lambda values: values) if full_grid else (lambda values: values[:1])
        uses_scale = algorithm.uses_ei or hp.beta_schedule == "frequentist"

        axes: Dict[str, List[float]] = {}
        if algorithm.is_gp:
            axes["bandwidth_squared"] = pick(hp.bandwidth_squared)
            if algorithm.is_mini:
                axes["C"] = pick(hp.C)
            if uses_scale:
                axes["beta_scale"] = pick(hp.beta_scale)
        elif algorithm is AlgorithmName.EPSILON_GREEDY:
            axes["a"] = pick(hp.epsilon_a)
            axes["b"] = pick(hp.epsilon_b)

        names = list(axes)
        return [dict(zip(names, values)) for values in product(*axes.values())]


def combination_id(params: Dict[str, float]) -> str:
    """Stable, filesystem-safe label for a hyperparameter combination"""
    if not params:
        return "default"
    return "_".join(f"{k}={params[k]:.6g}" for k in sorted(params))


def parse_experiment_config(data: Dict[str, Any]) -> ExperimentConfig:
    """Validate a raw mapping into an ExperimentConfig"""
    if not isinstance(data, dict):
        raise ConfigurationError("Experiment config must be a mapping at the top level")
    return ExperimentConfig.model_validate(data)


def load_experiment_config(path: Union[str, Path]) -> ExperimentConfig:
    """
    Load an experiment configuration from a YAML file.

    Raises:
        ConfigurationError: If the file is missing or not a mapping
        ValidationError: If a field is invalid
    """
    config_path = Path(path)
    if not config_path.exists():
        raise ConfigurationError(f"Config file not found: {config_path}")
    with open(config_path, encoding="utf-8") as f:
        data = yaml.safe_load(f)
    logger.info(f"Loaded experiment config from {config_path}")
    return parse_experiment_config(data or {})


def default_experiment_config() -> ExperimentConfig:
    """The shipped synthetic-function protocol"""
    text = resources.files(__package__).joinpath(DEFAULT_CONFIG_RESOURCE).read_text("utf-8")
    return parse_experiment_config(yaml.safe_load(text))
