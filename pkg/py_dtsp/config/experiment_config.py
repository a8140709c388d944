"""Solver parameter and experiment configuration management."""

import copy
import yaml
from typing import Dict, List, Any, Optional, Tuple, Literal
from pathlib import Path
from pydantic import BaseModel, Field, field_validator, model_validator
from ..exceptions import ConfigFileError


class AcoParams(BaseModel):
    """Ant System parameters."""

    alpha: float = Field(default=1.0, ge=0, description="Pheromone exponent")
    beta: float = Field(default=5.0, ge=0, description="Heuristic (1/d) exponent")
    rho: float = Field(default=0.1, gt=0, lt=1, description="Evaporation rate, open interval (0, 1)")
    q: float = Field(default=100.0, gt=0, description="Deposit constant Q")
    m: Optional[int] = Field(default=None, ge=1, description="Ant count (default: one ant per city)")
    tau0: Optional[float] = Field(default=None, gt=0, description="Initial pheromone (default: m / L_nn)")
    tau_min: float = Field(default=1e-9, ge=0, description="Pheromone floor")
    max_iters: int = Field(default=100, ge=1, description="Iteration budget")


class HybridParams(BaseModel):
    """Parameters of the gradient-reinforced colony."""

    aco: AcoParams = Field(default_factory=AcoParams, description="Underlying Ant System parameters")
    t: float = Field(default=0.4, ge=0, description="Descent step of the reinforcement recurrence")
    tau_max: Optional[float] = Field(default=None, gt=0, description="Pheromone ceiling (default: Q)")
    x_max: Optional[float] = Field(default=None, gt=0, description="Reinforcement ceiling (default: tau_max / 10)")
    stagnation_window: Optional[int] = Field(
        default=15, ge=2,
        description="Identical colony-best iterations before a pheromone restart (null disables)"
    )
    local_search_best_only: bool = Field(
        default=False, description="Improve only the iteration-best tour instead of every ant"
    )
    local_search_rounds: Optional[int] = Field(
        default=None, ge=1, description="Steepest-descent round cap (default: 10 * n)"
    )

    @model_validator(mode="after")
    def check_ceiling(self):
        """Explicit ceilings must sit above the explicit initial pheromone."""
        if self.tau_max is not None and self.aco.tau0 is not None and self.tau_max <= self.aco.tau0:
            raise ValueError(f"tau_max ({self.tau_max}) must exceed tau0 ({self.aco.tau0})")
        return self

    def resolved_tau_max(self) -> float:
        return self.tau_max if self.tau_max is not None else self.aco.q

    def resolved_x_max(self) -> float:
        return self.x_max if self.x_max is not None else self.resolved_tau_max() / 10.0


class DescentConfig(BaseModel):
    """Continuous gradient-descent configuration."""

    step_mode: Literal["fixed", "decreasing"] = Field(
        default="fixed", description="fixed(t) or decreasing (t / n)"
    )
    t: Optional[float] = Field(
        default=None, ge=0, description="Step scalar (default: 0.4 when fixed, 1 when decreasing, i.e. 1 / n)"
    )
    epsilon: float = Field(default=1e-6, gt=0, description="Tolerance for both stopping rules")
    max_iters: int = Field(default=10000, ge=1, description="Iteration cap per restart")
    restarts: int = Field(default=3, ge=0, description="Random restarts after the first descent")
    init_box: List[Tuple[float, float]] = Field(
        default=[(-5.0, 5.0)],
        description="Sampling box for x_0: one (low, high) per dimension, or a single pair for all"
    )

    @field_validator("init_box")
    @classmethod
    def validate_init_box(cls, v):
        """Each bound pair must be ordered."""
        if not v:
            raise ValueError("init_box must not be empty")
        for low, high in v:
            if low > high:
                raise ValueError(f"init_box bound ({low}, {high}) is reversed")
        return v

    @model_validator(mode="after")
    def default_step(self):
        """Fill t from the step mode when it was not given."""
        if self.t is None:
            self.t = 1.0 if self.step_mode == "decreasing" else 0.4
        return self


class RandomInstanceSpec(BaseModel):
    """Seeded random instance description."""

    n: int = Field(..., ge=3, description="City count")
    bbox: Tuple[float, float] = Field(default=(100.0, 100.0), description="Box width and height")
    seed: int = Field(default=0, description="Instance PRNG seed")

    @field_validator("bbox")
    @classmethod
    def validate_bbox(cls, v):
        """Box dimensions must be positive."""
        if v[0] <= 0 or v[1] <= 0:
            raise ValueError(f"bbox dimensions must be positive, got {v}")
        return v


class InstanceSource(BaseModel):
    """Where the base instance comes from: a file or a random generator."""

    path: Optional[str] = Field(default=None, description="Native or TSPLIB instance file")
    random: Optional[RandomInstanceSpec] = Field(default=None, description="Random instance spec")

    @model_validator(mode="after")
    def exactly_one(self):
        """Exactly one of path / random must be set."""
        if (self.path is None) == (self.random is None):
            raise ValueError("instance needs exactly one of 'path' or 'random'")
        return self


class ExperimentConfig(BaseModel):
    """Complete experiment configuration."""

    name: str = Field(default="experiment", description="Experiment label")
    instance: InstanceSource = Field(..., description="Base instance source")
    events: Optional[str] = Field(default=None, description="Event schedule file")
    solver: Literal["aco", "hybrid"] = Field(default="hybrid", description="Solver to run")
    params: HybridParams = Field(default_factory=HybridParams, description="Solver parameters")
    runs: int = Field(default=10, ge=1, description="Repetition count R")
    run_seed_base: int = Field(default=0, ge=0, description="Run r uses seed run_seed_base + r")
    output_dir: str = Field(default="output", description="Artefact directory")

    def seeds(self) -> List[int]:
        return [self.run_seed_base + r for r in range(self.runs)]


def _resolve_config_path(name_or_path: str, experiments_dir: str) -> Path:
    """Accept a direct path or the name of a YAML file in the experiments directory."""
    direct = Path(name_or_path)
    if direct.is_file():
        return direct
    named = Path(experiments_dir) / f"{name_or_path}.yaml"
    if named.is_file():
        return named
    raise ConfigFileError(f"Experiment configuration not found: {name_or_path}")


def _anchor_input_paths(mapping: Dict[str, Any], base_dir: Path) -> Dict[str, Any]:
    """Make relative instance and event paths relative to the YAML file, not the working directory."""
    def anchored(value):
        if isinstance(value, str) and not Path(value).is_absolute():
            return str(base_dir / value)
        return value

    if mapping.get("events"):
        mapping["events"] = anchored(mapping["events"])
    instance = mapping.get("instance")
    if isinstance(instance, dict) and instance.get("path"):
        instance["path"] = anchored(instance["path"])
    return mapping


def load_config_mapping(name_or_path: str, experiments_dir: str = "experiments") -> Dict[str, Any]:
    """Load the raw YAML mapping of an experiment definition."""
    config_path = _resolve_config_path(name_or_path, experiments_dir)

    try:
        with open(config_path, 'r', encoding='utf-8') as f:
            config_data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigFileError(f"Malformed YAML in {config_path}: {e}") from e

    if config_data is None:
        return {}
    if not isinstance(config_data, dict):
        raise ConfigFileError(f"{config_path} must contain a mapping at top level")
    return _anchor_input_paths(config_data, config_path.parent)


def load_experiment_config(name_or_path: str, experiments_dir: str = "experiments") -> ExperimentConfig:
    """Load experiment configuration from YAML file."""
    return ExperimentConfig(**load_config_mapping(name_or_path, experiments_dir))


def apply_overrides(mapping: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """
    Merge dotted-key overrides into a nested mapping.

    Args:
        mapping: Parsed YAML mapping (left untouched)
        overrides: e.g. {"params.aco.alpha": 2.0}; None values are skipped

    Returns:
        New merged mapping
    """
    merged = copy.deepcopy(mapping)
    for dotted, value in overrides.items():
        if value is None:
            continue
        node = merged
        parts = dotted.split('.')
        for part in parts[:-1]:
            child = node.get(part)
            if not isinstance(child, dict):
                child = {}
                node[part] = child
            node = child
        node[parts[-1]] = value
    return merged


def build_experiment_config(name_or_path: Optional[str], overrides: Dict[str, Any],
                            experiments_dir: str = "experiments",
                            defaults: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """
    Load an optional YAML base, apply CLI overrides and validate.

    defaults fill top-level keys the file leaves out (e.g. runs from the
    application settings); overrides win over both.
    """
    base = load_config_mapping(name_or_path, experiments_dir) if name_or_path else {}
    for key, value in (defaults or {}).items():
        base.setdefault(key, value)

    # A CLI instance source replaces whatever the file declared
    if overrides.get("instance.path") is not None:
        base = {**base, "instance": {}}
    elif any(k.startswith("instance.random.") and v is not None for k, v in overrides.items()):
        instance = base.get("instance") or {}
        base = {**base, "instance": {"random": dict(instance.get("random") or {})}}

    return ExperimentConfig(**apply_overrides(base, overrides))


def list_available_experiments(experiments_dir: str = "experiments") -> List[str]:
    """List all available experiment configurations."""
    experiments_path = Path(experiments_dir)
    if not experiments_path.exists():
        return []

    return sorted(
        f.stem for f in experiments_path.glob("*.yaml")
        if f.is_file()
    )
