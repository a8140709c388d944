"""CSV artefact writer."""

import csv
import logging
from functools import singledispatch
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union
from ..bench.stats import BatchStats, ComparisonTable, SweepResult
from ..config.settings import get_settings
from ..data.instance import Instance, Tour
from ..exceptions import OutputFileError
from ..solvers.colony import RunResult

logger = logging.getLogger(__name__)


class CsvRenderer:
    """Writes diff-stable CSVs: fixed significant digits, seeds in full, '\\n' line endings."""

    def __init__(self, significant_digits: Optional[int] = None):
        self.digits = significant_digits or get_settings().csv_significant_digits

    def fmt(self, value: float) -> str:
        return f"{value:.{self.digits}g}"

    def write_rows(self, path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence]) -> Path:
        """Write header + rows; any OS failure becomes OutputFileError naming the path."""
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, 'w', newline='', encoding='utf-8') as f:
                writer = csv.writer(f, lineterminator='\n')
                writer.writerow(header)
                writer.writerows(rows)
        except OSError as e:
            raise OutputFileError(f"Cannot write CSV ({e.strerror or e})", str(path)) from e
        logger.debug(f"Wrote {path}")
        return path

    def render_summary(self, stats: BatchStats, path: Union[str, Path]) -> Path:
        return self.write_rows(
            path,
            ["solver", "runs", "average", "best", "worst"],
            [[stats.solver, stats.runs, self.fmt(stats.average), self.fmt(stats.best), self.fmt(stats.worst)]],
        )

    def render_runs(self, stats: BatchStats, path: Union[str, Path]) -> Path:
        return self.write_rows(
            path,
            ["seed", "final_length", "iterations_to_best"],
            [[r.seed, self.fmt(r.final_length), r.iterations_to_best] for r in stats.per_run],
        )

    def render_trace(self, result: RunResult, path: Union[str, Path]) -> Path:
        return self.write_rows(
            path,
            ["iteration", "best_length"],
            [[k, self.fmt(length)] for k, length in enumerate(result.best_length_per_iter, 1)],
        )

    def render_tour(self, tour: Tour, inst: Instance, path: Union[str, Path]) -> Path:
        rows: List[Sequence] = []
        for k, city_id in enumerate(tour.order):
            city = inst.cities[inst.index_of[city_id]]
            rows.append([k, city_id, self.fmt(city.x), self.fmt(city.y)])
        return self.write_rows(path, ["position", "city_id", "x", "y"], rows)

    def render_sweep(self, sweep: SweepResult, path: Union[str, Path]) -> Path:
        return self.write_rows(
            path,
            ["t", "runs", "average", "best", "worst", "mean_iterations_to_best"],
            [
                [self.fmt(t), s.runs, self.fmt(s.average), self.fmt(s.best), self.fmt(s.worst),
                 self.fmt(s.mean_iterations_to_best)]
                for t, s in sweep.points.items()
            ],
        )

    def render_comparison(self, table: ComparisonTable, path: Union[str, Path]) -> Path:
        return self.write_rows(
            path,
            ["seed", "length_a", "length_b", "winner"],
            [[r.seed, self.fmt(r.length_a), self.fmt(r.length_b), r.winner] for r in table.rows],
        )


@singledispatch
def emit_csv(data, path: Union[str, Path], renderer: Optional[CsvRenderer] = None) -> Path:
    """Write statistics or a convergence trace as CSV."""
    raise TypeError(f"No CSV layout for {type(data).__name__}")


@emit_csv.register
def _(data: BatchStats, path, renderer=None) -> Path:
    return (renderer or CsvRenderer()).render_summary(data, path)


@emit_csv.register
def _(data: RunResult, path, renderer=None) -> Path:
    return (renderer or CsvRenderer()).render_trace(data, path)


@emit_csv.register
def _(data: SweepResult, path, renderer=None) -> Path:
    return (renderer or CsvRenderer()).render_sweep(data, path)


@emit_csv.register
def _(data: ComparisonTable, path, renderer=None) -> Path:
    return (renderer or CsvRenderer()).render_comparison(data, path)
