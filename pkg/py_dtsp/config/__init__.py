"""Configuration management for py-dtsp."""

from .settings import Settings, get_settings
from .experiment_config import (
    AcoParams,
    HybridParams,
    DescentConfig,
    RandomInstanceSpec,
    InstanceSource,
    ExperimentConfig,
    load_experiment_config,
    build_experiment_config,
    list_available_experiments,
)

__all__ = [
    "Settings", "get_settings",
    "AcoParams", "HybridParams", "DescentConfig", "RandomInstanceSpec", "InstanceSource",
    "ExperimentConfig", "load_experiment_config", "build_experiment_config",
    "list_available_experiments",
]
