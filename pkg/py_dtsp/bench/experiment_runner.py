"""Seeded experiment batches, solver comparisons and t-sweeps."""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence, Tuple
from ..config import ExperimentConfig, Settings, get_settings
from ..config.experiment_config import InstanceSource
from ..data import EventSchedule, Instance, generate_random_instance, load_event_schedule, load_instance
from ..exceptions import InvalidArgumentError, InvalidComparisonError, OutputFileError, RunFailedError
from ..solvers import RunResult, run_aco, run_hybrid
from ..solvers.colony import initial_pheromone_level
from .stats import REFERENCE_ROWS, BatchStats, ComparisonTable, SweepResult

logger = logging.getLogger(__name__)


def build_instance(source: InstanceSource) -> Instance:
    """Materialise the base instance of an experiment."""
    if source.path is not None:
        return load_instance(source.path)
    spec = source.random
    return generate_random_instance(spec.n, spec.bbox, spec.seed)


def execute_run(cfg: ExperimentConfig, inst: Instance, schedule: EventSchedule, seed: int) -> RunResult:
    """One solver run for cfg (module-level so worker processes can pickle it)."""
    if cfg.solver == "aco":
        return run_aco(inst, schedule, cfg.params.aco, seed, tau_max=cfg.params.resolved_tau_max())
    return run_hybrid(inst, schedule, cfg.params, seed)


def _run_failed(e: Exception, run_index: int, seed: int) -> RunFailedError:
    logger.error(f"Run {run_index} (seed {seed}) failed: {e}")
    return RunFailedError(str(e), run_index, seed)


class ExperimentRunner:
    """Runs experiment batches and writes their artefacts."""

    def __init__(self, settings: Optional[Settings] = None):
        from ..renderer import CsvRenderer
        from ..templates import get_template_engine

        self.settings = settings or get_settings()
        self.csv_renderer = CsvRenderer(self.settings.csv_significant_digits)
        self.template_engine = get_template_engine()

    def load_problem(self, cfg: ExperimentConfig) -> Tuple[Instance, EventSchedule]:
        """Base instance plus the (validated) event schedule."""
        inst = build_instance(cfg.instance)
        schedule = load_event_schedule(cfg.events) if cfg.events else EventSchedule.empty()
        schedule.validate_against(inst)
        self.check_parameters(cfg, inst)
        return inst, schedule

    @staticmethod
    def check_parameters(cfg: ExperimentConfig, inst: Instance, seeds: Optional[Sequence[int]] = None) -> None:
        """Reject parameter combinations that would only fail once the runs start."""
        seeds = cfg.seeds() if seeds is None else seeds
        if any(seed < 0 for seed in seeds):
            raise InvalidArgumentError(f"Run seeds must be non-negative, got {min(seeds)}")

        aco = cfg.params.aco
        tau0 = initial_pheromone_level(inst, aco, aco.m or inst.n)
        tau_max = cfg.params.resolved_tau_max()
        if tau_max <= tau0:
            raise InvalidArgumentError(f"tau_max ({tau_max}) must exceed tau0 ({tau0:.6g})")

    def solve(self, cfg: ExperimentConfig, seed: int) -> RunResult:
        """Single run; writes trace_<seed>.csv and tour_<seed>.csv."""
        inst, schedule = self.load_problem(cfg)
        self.check_parameters(cfg, inst, [seed])
        result = execute_run(cfg, inst, schedule, seed)

        out = Path(cfg.output_dir)
        self.csv_renderer.render_trace(result, out / f"trace_{seed}.csv")
        final_inst = self._final_instance(inst, schedule, result.iterations)
        self.csv_renderer.render_tour(result.best_tour, final_inst, out / f"tour_{seed}.csv")
        return result

    @staticmethod
    def _final_instance(inst: Instance, schedule: EventSchedule, iterations: int) -> Instance:
        from ..data import apply_event
        for ev in schedule:
            if ev.at_iteration <= iterations:
                inst = apply_event(inst, ev)
        return inst

    def _run_all(self, cfg: ExperimentConfig, inst: Instance, schedule: EventSchedule) -> List[RunResult]:
        seeds = cfg.seeds()
        results: List[RunResult] = []

        if self.settings.workers > 1 and len(seeds) > 1:
            with ProcessPoolExecutor(max_workers=self.settings.workers) as executor:
                futures = [executor.submit(execute_run, cfg, inst, schedule, seed) for seed in seeds]
                # collected in run-index order whatever the completion order
                for run_index, (seed, future) in enumerate(zip(seeds, futures)):
                    try:
                        results.append(future.result())
                    except Exception as e:
                        raise _run_failed(e, run_index, seed) from e
            return results

        for run_index, seed in enumerate(seeds):
            try:
                results.append(execute_run(cfg, inst, schedule, seed))
            except Exception as e:
                raise _run_failed(e, run_index, seed) from e
        return results

    def run_batch(self, cfg: ExperimentConfig) -> BatchStats:
        """
        Execute cfg.runs seeded runs and aggregate their final best lengths.

        Writes trace_<seed>.csv per run plus summary.csv and runs.csv in
        cfg.output_dir.
        """
        try:
            logger.info(f"Starting batch '{cfg.name}': solver={cfg.solver}, runs={cfg.runs}, "
                        f"seeds {cfg.run_seed_base}..{cfg.run_seed_base + cfg.runs - 1}")
            start_time = time.perf_counter()

            inst, schedule = self.load_problem(cfg)
            results = self._run_all(cfg, inst, schedule)
            stats = BatchStats.from_results(cfg.solver, results)

            out = Path(cfg.output_dir)
            for result in results:
                self.csv_renderer.render_trace(result, out / f"trace_{result.seed}.csv")
            self.csv_renderer.render_summary(stats, out / "summary.csv")
            self.csv_renderer.render_runs(stats, out / "runs.csv")

            elapsed = time.perf_counter() - start_time
            logger.info(f"Batch '{cfg.name}' completed in {elapsed:.2f} seconds: average {stats.average:.6g}, "
                        f"best {stats.best:.6g}, worst {stats.worst:.6g}")
            return stats

        except Exception as e:
            logger.error(f"Failed to run batch {cfg.name}: {e}")
            raise

    @staticmethod
    def check_comparable(cfg_a: ExperimentConfig, cfg_b: ExperimentConfig) -> None:
        """Both configs must share instance, events, run count and seeds."""
        if cfg_a.instance != cfg_b.instance:
            raise InvalidComparisonError("Compared configs use different instances")
        if cfg_a.events != cfg_b.events:
            raise InvalidComparisonError("Compared configs use different event schedules")
        if cfg_a.seeds() != cfg_b.seeds():
            raise InvalidComparisonError(
                f"Compared configs use different seeds ({cfg_a.run_seed_base}+{cfg_a.runs} vs "
                f"{cfg_b.run_seed_base}+{cfg_b.runs})"
            )
        if cfg_a.params.aco.max_iters != cfg_b.params.aco.max_iters:
            raise InvalidComparisonError("Compared configs use different iteration budgets")

    def compare_solvers(self, cfg_a: ExperimentConfig, cfg_b: ExperimentConfig,
                        output_dir: Optional[str] = None) -> ComparisonTable:
        """
        Run both batches on shared seeds and tabulate per-seed wins.

        Batches write into <output_dir>/a and <output_dir>/b; comparison.csv
        and comparison.md go to output_dir.
        """
        self.check_comparable(cfg_a, cfg_b)
        out = Path(output_dir or cfg_a.output_dir)

        label_a, label_b = cfg_a.name, cfg_b.name
        if label_a == label_b:
            label_a, label_b = f"{label_a} (a)", f"{label_b} (b)"

        stats_a = self.run_batch(cfg_a.model_copy(update={"output_dir": str(out / "a")}))
        stats_b = self.run_batch(cfg_b.model_copy(update={"output_dir": str(out / "b")}))
        table = ComparisonTable.from_stats(label_a, stats_a, label_b, stats_b)

        self.csv_renderer.render_comparison(table, out / "comparison.csv")
        self._write_comparison_report(table, cfg_a, out / "comparison.md")

        logger.info(f"Comparison {label_a} vs {label_b}: wins {table.wins_a}/{table.wins_b}, ties {table.ties}")
        return table

    def _write_comparison_report(self, table: ComparisonTable, cfg: ExperimentConfig, path: Path) -> Path:
        inst = build_instance(cfg.instance)
        if cfg.instance.path is not None:
            instance_label = cfg.instance.path
        else:
            spec = cfg.instance.random
            instance_label = f"random n={spec.n}, bbox={spec.bbox[0]:g}x{spec.bbox[1]:g}, seed={spec.seed}"

        text = self.template_engine.render_template("comparison.md.j2", {
            "table": table,
            "instance_label": instance_label,
            "n_cities": inst.n,
            "reference_rows": REFERENCE_ROWS,
        })
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
        except OSError as e:
            raise OutputFileError(f"Cannot write report ({e.strerror or e})", str(path)) from e
        return path

    def sweep_t(self, cfg: ExperimentConfig, t_values: Sequence[float]) -> SweepResult:
        """One hybrid batch per t; writes sweep_t.csv plus each batch under t_<t>/."""
        if cfg.solver != "hybrid":
            raise InvalidArgumentError("A t-sweep needs the hybrid solver")
        if not t_values:
            raise InvalidArgumentError("t_values must not be empty")
        if any(t < 0 for t in t_values):
            raise InvalidArgumentError(f"t values must be non-negative, got {list(t_values)}")

        out = Path(cfg.output_dir)
        sweep = SweepResult()
        for t in t_values:
            params = cfg.params.model_copy(update={"t": float(t)})
            cfg_t = cfg.model_copy(update={
                "name": f"{cfg.name} t={t:g}",
                "params": params,
                "output_dir": str(out / f"t_{t:g}"),
            })
            sweep.points[float(t)] = self.run_batch(cfg_t)

        self.csv_renderer.render_sweep(sweep, out / "sweep_t.csv")
        return sweep


# Global runner instance
_runner: Optional[ExperimentRunner] = None


def get_experiment_runner() -> ExperimentRunner:
    """Get experiment runner instance."""
    global _runner
    if _runner is None:
        _runner = ExperimentRunner()
    return _runner


def run_batch(cfg: ExperimentConfig) -> BatchStats:
    """Execute a seeded batch; see ExperimentRunner.run_batch."""
    return get_experiment_runner().run_batch(cfg)


def compare_solvers(cfg_a: ExperimentConfig, cfg_b: ExperimentConfig,
                    output_dir: Optional[str] = None) -> ComparisonTable:
    """Head-to-head batches on shared seeds; see ExperimentRunner.compare_solvers."""
    return get_experiment_runner().compare_solvers(cfg_a, cfg_b, output_dir)


def sweep_t(cfg: ExperimentConfig, t_values: Sequence[float]) -> SweepResult:
    """Hybrid batches over several t values; see ExperimentRunner.sweep_t."""
    return get_experiment_runner().sweep_t(cfg, t_values)
