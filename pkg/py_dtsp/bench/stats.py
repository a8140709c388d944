"""Batch statistics and comparison tables."""

from typing import Dict, List, Literal, Sequence
import numpy as np
from pydantic import BaseModel, Field
from ..solvers.colony import RunResult

TIE_TOLERANCE = 1e-9


class RunSummary(BaseModel):
    """Final outcome of one run in a batch."""

    seed: int = Field(..., description="Run seed")
    final_length: float = Field(..., description="Final best-so-far tour length")
    iterations_to_best: int = Field(..., description="First iteration reaching the final best")


class BatchStats(BaseModel):
    """Average / best / worst final lengths over R runs."""

    solver: str = Field(..., description="Solver name")
    runs: int = Field(..., description="Run count R")
    average: float = Field(..., description="Mean final length")
    best: float = Field(..., description="Minimum final length")
    worst: float = Field(..., description="Maximum final length")
    mean_iterations_to_best: float = Field(..., description="Mean iterations to the final best")
    per_run: List[RunSummary] = Field(default=[], description="Per-run outcomes in run-index order")

    @classmethod
    def from_results(cls, solver: str, results: Sequence[RunResult]) -> "BatchStats":
        per_run = [
            RunSummary(seed=r.seed, final_length=r.final_length, iterations_to_best=r.iterations_to_best)
            for r in results
        ]
        return cls.from_run_summaries(solver, per_run)

    @classmethod
    def from_run_summaries(cls, solver: str, per_run: Sequence[RunSummary]) -> "BatchStats":
        if not per_run:
            raise ValueError("BatchStats needs at least one run")
        lengths = np.array([r.final_length for r in per_run])
        best = float(lengths.min())
        worst = float(lengths.max())
        # mean of identical values may drift by an ulp
        average = min(max(float(lengths.mean()), best), worst)
        return cls(
            solver=solver,
            runs=len(per_run),
            average=average,
            best=best,
            worst=worst,
            mean_iterations_to_best=float(np.mean([r.iterations_to_best for r in per_run])),
            per_run=list(per_run),
        )

    def seeds(self) -> List[int]:
        return [r.seed for r in self.per_run]


class ComparisonRow(BaseModel):
    """Per-seed head-to-head outcome."""

    seed: int
    length_a: float
    length_b: float
    winner: Literal["a", "b", "tie"]


class ComparisonTable(BaseModel):
    """Side-by-side statistics of two batches over shared seeds."""

    label_a: str
    label_b: str
    stats_a: BatchStats
    stats_b: BatchStats
    rows: List[ComparisonRow]
    wins_a: int
    wins_b: int
    ties: int

    @classmethod
    def from_stats(cls, label_a: str, stats_a: BatchStats, label_b: str, stats_b: BatchStats) -> "ComparisonTable":
        rows = []
        for ra, rb in zip(stats_a.per_run, stats_b.per_run):
            scale = max(1.0, abs(ra.final_length), abs(rb.final_length))
            if abs(ra.final_length - rb.final_length) <= TIE_TOLERANCE * scale:
                winner = "tie"
            elif ra.final_length < rb.final_length:
                winner = "a"
            else:
                winner = "b"
            rows.append(ComparisonRow(seed=ra.seed, length_a=ra.final_length, length_b=rb.final_length, winner=winner))

        return cls(
            label_a=label_a,
            label_b=label_b,
            stats_a=stats_a,
            stats_b=stats_b,
            rows=rows,
            wins_a=sum(r.winner == "a" for r in rows),
            wins_b=sum(r.winner == "b" for r in rows),
            ties=sum(r.winner == "tie" for r in rows),
        )


class SweepResult(BaseModel):
    """Batch statistics per value of the descent step t."""

    points: Dict[float, BatchStats] = Field(default={}, description="t -> statistics, in sweep order")


# Reference rows of the published comparison; the baseline row's worst < average
# cannot come from order statistics and is shown as printed.
REFERENCE_ROWS = [
    {"algorithm": "ACO", "average": 385, "best": 340, "worst": 368},
    {"algorithm": "GA", "average": 464, "best": 349, "worst": 826},
    {"algorithm": "ACO + GA hybrid", "average": 384, "best": 340, "worst": 358},
    {"algorithm": "ACO + gradient descent", "average": 365, "best": 340, "worst": 347},
]
