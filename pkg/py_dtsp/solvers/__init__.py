"""Solvers: continuous descent, Ant System, 2-opt descent and the hybrid colony."""

from .graddesc import (
    ScalarField, DescentResult, descend_step, stop_by_gradient, minimize, finite_difference_gradient,
)
from .pheromone import PheromoneMatrix, init_pheromone, evaporate, deposit
from .ants import AntState, transition_probabilities, construct_tour
from .colony import RunResult
from .aco import run_aco
from .localsearch import ReconnectMove, apply_2opt_move, best_reconnection, steepest_descent_improve
from .dynamics import handle_dynamic_event
from .hybrid import (
    GradientTermState, gradient_reinforcement, hybrid_pheromone_update, detect_stagnation,
    reinit_pheromone, run_hybrid,
)

__all__ = [
    "ScalarField", "DescentResult", "descend_step", "stop_by_gradient", "minimize",
    "finite_difference_gradient",
    "PheromoneMatrix", "init_pheromone", "evaporate", "deposit",
    "AntState", "transition_probabilities", "construct_tour", "RunResult", "run_aco",
    "ReconnectMove", "apply_2opt_move", "best_reconnection", "steepest_descent_improve",
    "handle_dynamic_event",
    "GradientTermState", "gradient_reinforcement", "hybrid_pheromone_update", "detect_stagnation",
    "reinit_pheromone", "run_hybrid",
]
