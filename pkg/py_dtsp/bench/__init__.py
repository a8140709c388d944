"""Experiment harness: batches, comparisons and parameter sweeps."""

from .stats import BatchStats, RunSummary, ComparisonTable, ComparisonRow, SweepResult
from .experiment_runner import (
    ExperimentRunner, get_experiment_runner, build_instance, run_batch, compare_solvers, sweep_t,
)

__all__ = [
    "BatchStats", "RunSummary", "ComparisonTable", "ComparisonRow", "SweepResult",
    "ExperimentRunner", "get_experiment_runner", "build_instance",
    "run_batch", "compare_solvers", "sweep_t",
]
