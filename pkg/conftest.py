"""Shared fixtures for the py-dtsp test suite."""

import sys
from pathlib import Path
import pytest

# Add the project root to Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from py_dtsp.config import AcoParams, ExperimentConfig, HybridParams, InstanceSource, RandomInstanceSpec
from py_dtsp.config.settings import Settings, reset_settings
from py_dtsp.data import City, Instance, make_tour


@pytest.fixture(autouse=True)
def fresh_settings():
    """Every test sees settings read from its own environment."""
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def unit_square() -> Instance:
    """Corners A(0,0)=0, B(1,0)=1, C(1,1)=2, D(0,1)=3."""
    return Instance.from_cities([City(0, 0.0, 0.0), City(1, 1.0, 0.0), City(2, 1.0, 1.0), City(3, 0.0, 1.0)])


@pytest.fixture
def crossed_square(unit_square):
    """Tour A, C, B, D of the unit square: two diagonals, length 2 + 2*sqrt(2)."""
    return make_tour(unit_square, (0, 2, 1, 3))


@pytest.fixture
def serial_settings(tmp_path) -> Settings:
    return Settings(output_dir=str(tmp_path / "output"), workers=1, csv_significant_digits=6)


@pytest.fixture
def small_config(tmp_path):
    """Factory for quick random-instance experiments."""

    def make(solver: str = "aco", n: int = 8, iters: int = 5, runs: int = 3, out: str = "out", **params):
        hybrid = HybridParams(aco=AcoParams(max_iters=iters), **params)
        return ExperimentConfig(
            name=f"small_{solver}",
            instance=InstanceSource(random=RandomInstanceSpec(n=n, seed=11)),
            solver=solver,
            params=hybrid,
            runs=runs,
            output_dir=str(tmp_path / out),
        )

    return make
