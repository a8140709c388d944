"""Application settings and configuration."""

from typing import Optional
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings."""

    model_config = SettingsConfigDict(
        env_prefix="DTSP_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # Paths
    output_dir: str = Field(
        default="output",
        description="Default directory for batch artefacts"
    )
    experiments_dir: str = Field(
        default="experiments",
        description="Directory containing named experiment definitions"
    )

    # Batch execution
    workers: int = Field(
        default=1,
        ge=1,
        description="Processes used for independent runs of a batch (1 = serial)"
    )
    default_runs: int = Field(
        default=10,
        ge=1,
        description="Repetitions per batch when the config does not say"
    )

    # Artefacts
    csv_significant_digits: int = Field(
        default=6,
        ge=1,
        le=17,
        description="Significant digits for floats written to CSV"
    )

    # Logging
    log_level: str = Field(
        default="INFO",
        description="Logging level"
    )


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get application settings (singleton pattern)."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Drop the cached settings so the next call re-reads the environment."""
    global _settings
    _settings = None
