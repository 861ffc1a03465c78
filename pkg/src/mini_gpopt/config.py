"""
Configuration management for mini-gpopt.
Loads and validates process-level settings from environment variables with proper defaults.
"""
from typing import Optional
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class GPOptSettings(BaseSettings):
    """
    Process-level settings for mini-gpopt.
    Loads from GPOPT_* environment variables (or a .env file) with validation.
    """

    model_config = SettingsConfigDict(
        env_prefix="GPOPT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore"
    )

    # Logging
    LOG_LEVEL: str = Field(
        default="INFO",
        description="Log level: DEBUG, INFO, WARNING, ERROR"
    )

    # Numerical limits
    MAX_GRID_SIZE: int = Field(
        default=1_000_000,
        description="Largest candidate grid build_grid will materialize"
    )
    SCORING_CHUNK_SIZE: int = Field(
        default=4096,
        description="Candidates scored per block when maximizing an acquisition"
    )
    VARIANCE_TOLERANCE: float = Field(
        default=1e-12,
        description="Negative posterior variances above -tolerance are clamped to zero"
    )

    # Harness defaults
    DEFAULT_WORKERS: int = Field(
        default=1,
        description="Worker processes used by the experiment harness"
    )
    DEFAULT_OUTPUT_DIR: str = Field(
        default="results",
        description="Directory experiment outputs are written to"
    )

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level"""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        v = v.upper()
        if v not in valid_levels:
            raise ValueError(f"LOG_LEVEL must be one of {valid_levels}")
        return v

    @field_validator("MAX_GRID_SIZE", "SCORING_CHUNK_SIZE", "DEFAULT_WORKERS")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        """Counts and sizes must be at least one"""
        if v < 1:
            raise ValueError("must be >= 1")
        return v

    @field_validator("VARIANCE_TOLERANCE")
    @classmethod
    def validate_tolerance(cls, v: float) -> float:
        if not 0 <= v < 1e-3:
            raise ValueError("VARIANCE_TOLERANCE must be in [0, 1e-3)")
        return v

    def to_dict(self) -> dict:
        """Convert settings to a plain dictionary"""
        return self.model_dump()


def load_settings() -> GPOptSettings:
    """
    Load settings from environment variables.

    Returns:
        GPOptSettings: Validated settings object

    Raises:
        ValidationError: If a variable is present but invalid
    """
    return GPOptSettings()


# Singleton instance
_settings: Optional[GPOptSettings] = None


def get_settings() -> GPOptSettings:
    """Get or create the singleton settings instance"""
    global _settings
    if _settings is None:
        _settings = load_settings()
    return _settings


def reset_settings() -> None:
    """Drop the cached settings so the next get_settings() re-reads the environment"""
    global _settings
    _settings = None
