"""Ant System with local search and gradient-driven pheromone reinforcement."""

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple
import numpy as np
from ..config.experiment_config import HybridParams
from ..data.events import EventSchedule
from ..data.instance import Instance, Tour
from ..exceptions import InvalidArgumentError
from .colony import RunResult, UpdatePolicy, run_colony
from .dynamics import handle_dynamic_event
from .pheromone import PheromoneMatrix, deposit, evaporate

logger = logging.getLogger(__name__)

STAGNATION_TOLERANCE = 1e-9


@dataclass(frozen=True)
class GradientTermState:
    """Reinforcement scalar x_n, kept in [0, x_max], and the last best-so-far length."""

    x: float = 0.0
    prev_best_length: Optional[float] = None
    x_max: float = math.inf


def gradient_reinforcement(state: GradientTermState, new_best_length: float, t: float) -> GradientTermState:
    """
    One descent step x' = clamp(x - t * g, 0, x_max).

    g is the relative change of the best-so-far length since the previous
    iteration (0 on the first call), so improvements raise x.
    """
    if new_best_length <= 0:
        raise InvalidArgumentError(f"Best length must be positive, got {new_best_length}")
    if t < 0:
        raise InvalidArgumentError(f"t must be non-negative, got {t}")

    if state.prev_best_length is None:
        g = 0.0
    else:
        g = (new_best_length - state.prev_best_length) / state.prev_best_length
    x = min(max(state.x - t * g, 0.0), state.x_max)
    return replace(state, x=x, prev_best_length=new_best_length)


def hybrid_pheromone_update(ph: PheromoneMatrix, tours: Sequence[Tour], best_tour: Tour,
                            params: HybridParams, state: GradientTermState) -> PheromoneMatrix:
    """
    Evaporate, deposit Q / L_k per ant, add state.x on best_tour's edges, clamp.

    With state.x == 0 this is exactly deposit(evaporate(ph)).
    """
    updated = deposit(evaporate(ph, params.aco.rho), tours, params.aco.q)
    if state.x <= 0:
        return updated

    pos = updated.tour_positions(best_tour)
    nxt = np.roll(pos, -1)
    tau = np.array(updated.tau)
    tau[pos, nxt] += state.x
    tau[nxt, pos] += state.x
    return updated.with_tau(np.clip(tau, ph.tau_min, ph.tau_max))


def detect_stagnation(history: Sequence[float], window: int) -> bool:
    """True when the last window colony-best lengths agree within 1e-9."""
    if window < 2:
        raise InvalidArgumentError(f"Stagnation window must be >= 2, got {window}")
    if len(history) < window:
        return False
    recent = history[-window:]
    return max(recent) - min(recent) <= STAGNATION_TOLERANCE


def reinit_pheromone(ph: PheromoneMatrix, tau0: float,
                     state: GradientTermState) -> Tuple[PheromoneMatrix, GradientTermState]:
    """Reset every edge to tau0 and x to 0; the last best-so-far length is kept."""
    level = min(max(tau0, ph.tau_min), ph.tau_max)
    return ph.with_tau(np.full((ph.n, ph.n), level)), replace(state, x=0.0)


class GradientUpdate(UpdatePolicy):
    """Hybrid update: gradient term, reinforced deposit and stagnation restarts."""

    name = "hybrid"

    def __init__(self, params: HybridParams):
        self.params = params
        self.state = GradientTermState(x_max=params.resolved_x_max())
        self.history = []

    def on_city_set_change(self) -> None:
        self.state = replace(self.state, prev_best_length=None)
        self.history = []

    @property
    def reinforcement(self) -> float:
        return self.state.x

    def update(self, ph: PheromoneMatrix, tours: Sequence[Tour], iteration_best: Tour,
               best_so_far: Tour) -> Tuple[PheromoneMatrix, bool]:
        # x follows the best-so-far length; restarts watch the iteration best
        self.state = gradient_reinforcement(self.state, best_so_far.length, self.params.t)
        ph = hybrid_pheromone_update(ph, tours, best_so_far, self.params, self.state)

        self.history.append(iteration_best.length)
        window = self.params.stagnation_window
        if window is not None and detect_stagnation(self.history, window):
            logger.warning(
                f"Colony best stuck at {iteration_best.length:.6g} for {window} iterations, "
                f"re-initialising pheromone"
            )
            ph, self.state = reinit_pheromone(ph, self.tau0, self.state)
            self.history = []
            return ph, True
        return ph, False


def run_hybrid(inst: Instance, schedule: Optional[EventSchedule], params: HybridParams,
               seed: int) -> RunResult:
    """
    Run the hybrid colony.

    Per iteration: events, tour construction, steepest 2-opt on every ant
    (or the best one only), gradient term update, reinforced pheromone
    update, stagnation restart.
    """
    schedule = schedule or EventSchedule.empty()
    return run_colony(
        inst, schedule, params.aco, seed,
        policy=GradientUpdate(params),
        tau_max=params.resolved_tau_max(),
        local_search=True,
        local_search_best_only=params.local_search_best_only,
        local_search_rounds=params.local_search_rounds,
    )


__all__ = [
    "GradientTermState", "GradientUpdate", "gradient_reinforcement", "hybrid_pheromone_update",
    "detect_stagnation", "reinit_pheromone", "handle_dynamic_event", "run_hybrid",
]
