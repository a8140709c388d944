"""Baseline Ant System solver."""

import logging
from typing import Optional, Sequence, Tuple
from ..config.experiment_config import AcoParams
from ..data.events import EventSchedule
from ..data.instance import Instance, Tour
from .ants import AntState, construct_tour, transition_probabilities
from .colony import RunResult, UpdatePolicy, run_colony
from .pheromone import PheromoneMatrix, deposit, evaporate, init_pheromone

logger = logging.getLogger(__name__)


class AntSystemUpdate(UpdatePolicy):
    """Evaporate, then every ant deposits Q / L_k on its edges."""

    name = "aco"

    def __init__(self, params: AcoParams):
        self.params = params

    def update(self, ph: PheromoneMatrix, tours: Sequence[Tour], iteration_best: Tour,
               best_so_far: Tour) -> Tuple[PheromoneMatrix, bool]:
        return deposit(evaporate(ph, self.params.rho), tours, self.params.q), False


def run_aco(inst: Instance, schedule: Optional[EventSchedule], params: AcoParams, seed: int,
            tau_max: Optional[float] = None, local_search: bool = False,
            local_search_rounds: Optional[int] = None) -> RunResult:
    """
    Run the baseline Ant System.

    Args:
        inst: Base instance
        schedule: Dynamic events (None or empty for a static run)
        params: Ant System parameters
        seed: Run seed; every random draw derives from it
        tau_max: Pheromone ceiling (default: Q)
        local_search: Improve every ant's tour by steepest 2-opt descent

    Returns:
        RunResult with the best-so-far trace
    """
    schedule = schedule or EventSchedule.empty()
    ceiling = tau_max if tau_max is not None else params.q
    return run_colony(
        inst, schedule, params, seed,
        policy=AntSystemUpdate(params),
        tau_max=ceiling,
        local_search=local_search,
        local_search_rounds=local_search_rounds,
    )


__all__ = [
    "AntState", "PheromoneMatrix", "RunResult", "AntSystemUpdate",
    "init_pheromone", "transition_probabilities", "construct_tour",
    "evaporate", "deposit", "run_aco",
]
