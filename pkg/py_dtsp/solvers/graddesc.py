"""Continuous gradient-descent minimizer with random restarts."""

import logging
from dataclasses import dataclass
from typing import Callable, List, Sequence
import numpy as np
from ..config.experiment_config import DescentConfig
from ..exceptions import InvalidArgumentError, NumericalFailureError

logger = logging.getLogger(__name__)

DIVERGENCE_LIMIT = 1e12


@dataclass(frozen=True)
class ScalarField:
    """A differentiable f: R^dim -> R with its analytic gradient."""

    dim: int
    eval: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    name: str = "field"


@dataclass(frozen=True)
class RestartOutcome:
    """Final state of one descent."""

    restart: int
    final_x: np.ndarray
    final_f: float
    iterations: int
    converged: bool
    diverged: bool


@dataclass(frozen=True)
class DescentResult:
    """Lowest (x, f(x)) pair over all restarts, plus per-restart outcomes."""

    best_x: np.ndarray
    best_f: float
    iterations_used: int
    converged: bool
    restarts: List[RestartOutcome]


def descend_step(x: Sequence[float], g: Sequence[float], step: float) -> np.ndarray:
    """x - step * g, componentwise."""
    x = np.asarray(x, dtype=float)
    g = np.asarray(g, dtype=float)
    if x.shape != g.shape:
        raise InvalidArgumentError(f"Point shape {x.shape} does not match gradient shape {g.shape}")
    if step < 0:
        raise InvalidArgumentError(f"Step must be non-negative, got {step}")
    return x - step * g


def stop_by_gradient(g: Sequence[float], epsilon: float) -> bool:
    """True when every partial derivative is within epsilon of zero."""
    if epsilon <= 0:
        raise InvalidArgumentError(f"epsilon must be positive, got {epsilon}")
    return bool(np.all(np.abs(np.asarray(g, dtype=float)) <= epsilon))


def finite_difference_gradient(field: ScalarField, x: Sequence[float], h: float = 1e-5) -> np.ndarray:
    """Central-difference estimate of grad f at x."""
    if h <= 0:
        raise InvalidArgumentError(f"h must be positive, got {h}")
    x = np.asarray(x, dtype=float)
    g = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        e = np.zeros_like(x)
        e[i] = h
        forward = field.eval(x + e)
        backward = field.eval(x - e)
        if not (np.isfinite(forward) and np.isfinite(backward)):
            raise NumericalFailureError(f"Non-finite value of {field.name} near component {i}", x)
        g[i] = (forward - backward) / (2.0 * h)
    return g


def _step_size(cfg: DescentConfig, n: int) -> float:
    if cfg.step_mode == "decreasing":
        return cfg.t / n
    return cfg.t


def _sample_start(cfg: DescentConfig, dim: int, rng: np.random.Generator) -> np.ndarray:
    if len(cfg.init_box) == dim:
        box = cfg.init_box
    elif len(cfg.init_box) == 1:
        box = cfg.init_box * dim
    else:
        raise InvalidArgumentError(f"init_box has {len(cfg.init_box)} bounds for a {dim}-d field")
    low = np.array([b[0] for b in box], dtype=float)
    high = np.array([b[1] for b in box], dtype=float)
    return low + (high - low) * rng.random(dim)


def _evaluate(field: ScalarField, x: np.ndarray):
    f = float(field.eval(x))
    g = np.asarray(field.grad(x), dtype=float)
    if g.shape != (field.dim,):
        raise InvalidArgumentError(f"Gradient of {field.name} has shape {g.shape}, expected ({field.dim},)")
    if not np.isfinite(f) or not np.all(np.isfinite(g)):
        raise NumericalFailureError(f"Non-finite value or gradient of {field.name}", x)
    return f, g


def _descend(field: ScalarField, cfg: DescentConfig, restart: int, x0: np.ndarray):
    """One descent; returns (outcome, best_x, best_f) with the best iterate seen."""
    x = x0
    f, g = _evaluate(field, x)
    best_x, best_f = x, f

    for n in range(1, cfg.max_iters + 1):
        x_next = descend_step(x, g, _step_size(cfg, n))
        f_next, g_next = _evaluate(field, x_next)

        if abs(f_next) > DIVERGENCE_LIMIT:
            logger.warning(f"Restart {restart} of {field.name} diverged at iteration {n} (|f|={abs(f_next):.3g})")
            outcome = RestartOutcome(restart, x_next, f_next, n, converged=False, diverged=True)
            return outcome, best_x, best_f

        if f_next < best_f:
            best_x, best_f = x_next, f_next

        settled = abs(f_next - f) <= cfg.epsilon and stop_by_gradient(g_next, cfg.epsilon)
        x, f, g = x_next, f_next, g_next
        if settled:
            return RestartOutcome(restart, x, f, n, converged=True, diverged=False), best_x, best_f

    return RestartOutcome(restart, x, f, cfg.max_iters, converged=False, diverged=False), best_x, best_f


def minimize(field: ScalarField, cfg: DescentConfig, seed: int = 0) -> DescentResult:
    """
    Minimize field by gradient descent from 1 + cfg.restarts random starts.

    A descent stops when both the value-change and the gradient-magnitude
    rules hold (converged) or at cfg.max_iters. Restart r draws x_0 from
    its own stream seeded by (seed, r); the lowest pair wins, ties going to
    the lowest restart index.
    """
    outcomes: List[RestartOutcome] = []
    best = None

    for restart in range(cfg.restarts + 1):
        rng = np.random.default_rng([seed, restart])
        x0 = _sample_start(cfg, field.dim, rng)
        outcome, best_x, best_f = _descend(field, cfg, restart, x0)
        outcomes.append(outcome)
        logger.debug(
            f"{field.name} restart {restart}: f={outcome.final_f:.6g} after {outcome.iterations} "
            f"iterations (converged={outcome.converged})"
        )
        if best is None or best_f < best[1]:
            best = (best_x, best_f, outcome)

    best_x, best_f, winner = best
    return DescentResult(
        best_x=best_x,
        best_f=best_f,
        iterations_used=winner.iterations,
        converged=winner.converged,
        restarts=outcomes,
    )


def quadratic_field(c: float = 1.0, a: float = 3.0) -> ScalarField:
    """f(x) = c (x - a)^2 in one dimension."""
    return ScalarField(
        dim=1,
        eval=lambda x: float(c * (x[0] - a) ** 2),
        grad=lambda x: np.array([2.0 * c * (x[0] - a)]),
        name=f"quadratic(c={c}, a={a})",
    )


def linear_field(coefs: Sequence[float]) -> ScalarField:
    """f(x) = coefs . x"""
    w = np.asarray(coefs, dtype=float)
    return ScalarField(dim=w.shape[0], eval=lambda x: float(w @ x), grad=lambda x: w.copy(), name="linear")


def cubic_field() -> ScalarField:
    """f(x) = x^3 in one dimension."""
    return ScalarField(dim=1, eval=lambda x: float(x[0] ** 3), grad=lambda x: np.array([3.0 * x[0] ** 2]), name="cubic")


def sphere_field(dim: int = 2) -> ScalarField:
    """f(x) = |x|^2"""
    return ScalarField(dim=dim, eval=lambda x: float(x @ x), grad=lambda x: 2.0 * x, name=f"sphere({dim})")


def rosenbrock_field(a: float = 1.0, b: float = 100.0) -> ScalarField:
    """f(x, y) = (a - x)^2 + b (y - x^2)^2, minimum 0 at (a, a^2)."""

    def value(p: np.ndarray) -> float:
        return float((a - p[0]) ** 2 + b * (p[1] - p[0] ** 2) ** 2)

    def gradient(p: np.ndarray) -> np.ndarray:
        return np.array([
            -2.0 * (a - p[0]) - 4.0 * b * p[0] * (p[1] - p[0] ** 2),
            2.0 * b * (p[1] - p[0] ** 2),
        ])

    return ScalarField(dim=2, eval=value, grad=gradient, name=f"rosenbrock(a={a}, b={b})")


SHIPPED_FIELDS = {
    "quadratic": quadratic_field,
    "sphere": sphere_field,
    "rosenbrock": rosenbrock_field,
    "cubic": cubic_field,
}
