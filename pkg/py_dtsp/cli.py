"""Command-line interface for the dynamic TSP solvers and experiment harness."""

import logging
import sys
from typing import Any, Dict, List, Optional
import click
from pydantic import ValidationError
from . import __version__
from .bench import ExperimentRunner
from .config import (
    DescentConfig, ExperimentConfig, build_experiment_config, get_settings, list_available_experiments,
)
from .config.experiment_config import load_config_mapping
from .exceptions import (
    ConfigFileError, DtspError, EventApplicationError, InstanceFormatError, InvalidArgumentError,
    InvalidInstanceError,
)
from .solvers.graddesc import SHIPPED_FIELDS, minimize

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

EXIT_CONFIG_ERROR = 1
EXIT_RUNTIME_ERROR = 2

# Bad input files and parameters; anything else failing mid-run is a runtime error
CONFIG_ERRORS = (
    ValidationError, ConfigFileError, FileNotFoundError, InstanceFormatError,
    InvalidInstanceError, EventApplicationError, InvalidArgumentError,
)


def _fail(action: str, e: Exception) -> None:
    """Report e on stderr and exit with the matching code."""
    click.echo(f"✗ Error {action}: {e}", err=True)
    if isinstance(e, CONFIG_ERRORS):
        sys.exit(EXIT_CONFIG_ERROR)
    if logging.getLogger().isEnabledFor(logging.DEBUG):
        import traceback
        click.echo(traceback.format_exc(), err=True)
    sys.exit(EXIT_RUNTIME_ERROR)


def _parse_t_values(ctx, param, value: Optional[str]) -> Optional[List[float]]:
    if value is None:
        return None
    try:
        return [float(v) for v in value.split(',') if v.strip()]
    except ValueError:
        raise click.BadParameter(f"expected a comma-separated list of numbers, got {value!r}")


def solver_options(func):
    """Instance, event and solver parameter flags shared by every run command."""
    options = [
        click.option('--instance', 'instance', type=click.Path(), help='Instance file (native or TSPLIB)'),
        click.option('--random-n', type=int, help='Generate a random instance with this many cities'),
        click.option('--bbox', type=float, nargs=2, default=None, help='Random instance box: WIDTH HEIGHT'),
        click.option('--instance-seed', type=int, help='Random instance seed'),
        click.option('--events', type=click.Path(), help='Dynamic event schedule file'),
        click.option('--iters', type=int, help='Iteration budget'),
        click.option('--alpha', type=float, help='Pheromone exponent'),
        click.option('--beta', type=float, help='Heuristic exponent'),
        click.option('--rho', type=float, help='Evaporation rate'),
        click.option('--q', 'q', type=float, help='Deposit constant'),
        click.option('--ants', type=int, help='Ant count (default: one per city)'),
        click.option('--t', 't', type=float, help='Descent step of the hybrid reinforcement'),
        click.option('--tau-max', type=float, help='Pheromone ceiling'),
        click.option('--stagnation-window', type=int, help='Stagnation restart window (0 disables)'),
        click.option('--out', type=click.Path(), help='Output directory'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _overrides(opts: Dict[str, Any]) -> Dict[str, Any]:
    """Map CLI flag values onto dotted config keys."""
    window = opts.get('stagnation_window')
    return {
        'instance.path': opts.get('instance'),
        'instance.random.n': opts.get('random_n'),
        'instance.random.bbox': list(opts['bbox']) if opts.get('bbox') else None,
        'instance.random.seed': opts.get('instance_seed'),
        'events': opts.get('events'),
        'solver': opts.get('solver'),
        'params.aco.max_iters': opts.get('iters'),
        'params.aco.alpha': opts.get('alpha'),
        'params.aco.beta': opts.get('beta'),
        'params.aco.rho': opts.get('rho'),
        'params.aco.q': opts.get('q'),
        'params.aco.m': opts.get('ants'),
        'params.t': opts.get('t'),
        'params.tau_max': opts.get('tau_max'),
        'params.stagnation_window': window if window else None,
        'output_dir': opts.get('out'),
        'runs': opts.get('runs'),
        'run_seed_base': opts.get('seed_base'),
    }


def _build_config(config: Optional[str], opts: Dict[str, Any]) -> ExperimentConfig:
    settings = get_settings()
    cfg = build_experiment_config(
        config,
        _overrides(opts),
        settings.experiments_dir,
        defaults={'runs': settings.default_runs, 'output_dir': settings.output_dir},
    )
    if opts.get('stagnation_window') == 0:
        cfg = cfg.model_copy(update={'params': cfg.params.model_copy(update={'stagnation_window': None})})
    return cfg


def _print_stats(stats) -> None:
    click.echo(f"  {stats.solver}: runs {stats.runs}, average {stats.average:.6g}, "
               f"best {stats.best:.6g}, worst {stats.worst:.6g}")


@click.group()
@click.option('--verbose', '-v', is_flag=True, help='Enable verbose logging')
@click.pass_context
def cli(ctx, verbose):
    """Dynamic TSP solvers: Ant System and its gradient-reinforced hybrid."""
    root = logging.getLogger()
    root.setLevel(logging.DEBUG if verbose else get_settings().log_level.upper())

    ctx.ensure_object(dict)
    ctx.obj['verbose'] = verbose


@cli.command()
@click.option('--config', '-c', help='Experiment name or YAML path')
@click.option('--solver', type=click.Choice(['aco', 'hybrid']), help='Solver to run')
@click.option('--seed', type=int, default=0, show_default=True, help='Run seed')
@solver_options
def solve(config, solver, seed, **opts):
    """Run one seeded solver run and write its trace and tour."""
    try:
        cfg = _build_config(config, {**opts, 'solver': solver})
        result = ExperimentRunner().solve(cfg, seed)

        click.echo(f"✓ {cfg.solver} run finished: best length {result.final_length:.6g} "
                   f"(reached at iteration {result.iterations_to_best})")
        click.echo(f"  Tour: {' '.join(str(c) for c in result.best_tour.order)}")
        if result.reinit_iterations:
            click.echo(f"  Pheromone restarts at iterations: {result.reinit_iterations}")
        click.echo(f"  Artefacts in: {cfg.output_dir}")

    except Exception as e:
        _fail("solving", e)


@cli.command()
@click.option('--config', '-c', help='Experiment name or YAML path')
@click.option('--solver', type=click.Choice(['aco', 'hybrid']), help='Solver to run')
@click.option('--runs', type=int, help='Number of runs')
@click.option('--seed-base', type=int, help='Run r uses seed SEED_BASE + r')
@solver_options
def batch(config, solver, runs, seed_base, **opts):
    """Run a seeded batch and write summary.csv, runs.csv and per-run traces."""
    try:
        cfg = _build_config(config, {**opts, 'solver': solver, 'runs': runs, 'seed_base': seed_base})
        click.echo(f"Running batch '{cfg.name}' ({cfg.runs} runs)...")
        stats = ExperimentRunner().run_batch(cfg)

        click.echo("✓ Batch completed")
        _print_stats(stats)
        click.echo(f"  Artefacts in: {cfg.output_dir}")

    except Exception as e:
        _fail("running batch", e)


@cli.command()
@click.option('--config-a', help='Experiment for side A (name or YAML path)')
@click.option('--config-b', help='Experiment for side B (default: same as A)')
@click.option('--solver-a', type=click.Choice(['aco', 'hybrid']), help='Solver for side A')
@click.option('--solver-b', type=click.Choice(['aco', 'hybrid']), help='Solver for side B')
@click.option('--runs', type=int, help='Number of runs')
@click.option('--seed-base', type=int, help='Run r uses seed SEED_BASE + r')
@solver_options
def compare(config_a, config_b, solver_a, solver_b, runs, seed_base, **opts):
    """Run two parameter sets on the same seeds and tabulate wins."""
    try:
        config_b = config_b or config_a
        shared = {**opts, 'runs': runs, 'seed_base': seed_base}
        cfg_a = _build_config(config_a, {**shared, 'solver': solver_a})
        cfg_b = _build_config(config_b, {**shared, 'solver': solver_b})
        if cfg_a.name == cfg_b.name and cfg_a.solver != cfg_b.solver:
            cfg_a = cfg_a.model_copy(update={'name': f"{cfg_a.name} [{cfg_a.solver}]"})
            cfg_b = cfg_b.model_copy(update={'name': f"{cfg_b.name} [{cfg_b.solver}]"})

        output_dir = opts.get('out') or cfg_a.output_dir
        table = ExperimentRunner().compare_solvers(cfg_a, cfg_b, output_dir)

        click.echo("✓ Comparison completed")
        _print_stats(table.stats_a)
        _print_stats(table.stats_b)
        click.echo(f"  Wins: {table.label_a} {table.wins_a}, {table.label_b} {table.wins_b}, ties {table.ties}")
        click.echo(f"  Report: {output_dir}/comparison.md")

    except Exception as e:
        _fail("comparing solvers", e)


@cli.command('sweep-t')
@click.option('--config', '-c', help='Experiment name or YAML path')
@click.option('--t-values', callback=_parse_t_values, default='0,0.2,0.4,0.6,0.8,1.0', show_default=True,
              help='Comma-separated t values')
@click.option('--runs', type=int, help='Number of runs per t')
@click.option('--seed-base', type=int, help='Run r uses seed SEED_BASE + r')
@solver_options
def sweep_t(config, t_values, runs, seed_base, **opts):
    """Run hybrid batches over several t values and write sweep_t.csv."""
    try:
        cfg = _build_config(config, {**opts, 'solver': 'hybrid', 'runs': runs, 'seed_base': seed_base})
        sweep = ExperimentRunner().sweep_t(cfg, t_values)

        click.echo("✓ Sweep completed")
        for t, stats in sweep.points.items():
            click.echo(f"  t={t:g}: average {stats.average:.6g}, best {stats.best:.6g}, "
                       f"worst {stats.worst:.6g}, iterations to best {stats.mean_iterations_to_best:.1f}")
        click.echo(f"  Artefacts in: {cfg.output_dir}")

    except Exception as e:
        _fail("sweeping t", e)


@cli.command()
@click.option('--field', 'field_name', type=click.Choice(sorted(SHIPPED_FIELDS)), default='quadratic',
              show_default=True, help='Scalar field to minimize')
@click.option('--step-mode', type=click.Choice(['fixed', 'decreasing']), default='fixed', show_default=True)
@click.option('--t', 't', type=float, help='Step scalar (default: 0.4 fixed, 1 decreasing)')
@click.option('--epsilon', type=float, default=1e-6, show_default=True, help='Stopping tolerance')
@click.option('--max-iters', type=int, default=10000, show_default=True, help='Iteration cap per restart')
@click.option('--restarts', type=int, default=3, show_default=True, help='Random restarts')
@click.option('--box', type=float, nargs=2, default=(-5.0, 5.0), show_default=True, help='Start box: LOW HIGH')
@click.option('--seed', type=int, default=0, show_default=True, help='Restart seed')
def descend(field_name, step_mode, t, epsilon, max_iters, restarts, box, seed):
    """Minimize a shipped scalar field by gradient descent with restarts."""
    try:
        cfg = DescentConfig(step_mode=step_mode, t=t, epsilon=epsilon, max_iters=max_iters,
                            restarts=restarts, init_box=[tuple(box)])
        field = SHIPPED_FIELDS[field_name]()
        result = minimize(field, cfg, seed)

        status = "converged" if result.converged else "stopped at iteration cap"
        click.echo(f"✓ {field.name}: f = {result.best_f:.6g} at x = {[round(float(v), 6) for v in result.best_x]}")
        click.echo(f"  {status} after {result.iterations_used} iterations")
        for outcome in result.restarts:
            flag = " (diverged)" if outcome.diverged else ""
            click.echo(f"  restart {outcome.restart}: f = {outcome.final_f:.6g}, "
                       f"{outcome.iterations} iterations{flag}")

    except Exception as e:
        _fail("descending", e)


@cli.command('list-experiments')
def list_experiments():
    """List named experiment definitions."""
    try:
        settings = get_settings()
        names = list_available_experiments(settings.experiments_dir)

        if not names:
            click.echo("No experiments found")
            return

        click.echo("Available experiments:")
        for name in names:
            try:
                mapping = load_config_mapping(name, settings.experiments_dir)
                click.echo(f"  {name}: {mapping.get('description', mapping.get('name', name))}")
            except DtspError:
                click.echo(f"  {name}: (error loading definition)")

    except Exception as e:
        _fail("listing experiments", e)


@cli.command()
def version():
    """Show version information."""
    click.echo(f"py-dtsp version {__version__}")


def main():
    """Main entry point."""
    cli()


if __name__ == '__main__':
    main()
