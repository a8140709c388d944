"""Iteration loop shared by the baseline and hybrid colonies."""

import logging
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple
import numpy as np
from ..config.experiment_config import AcoParams
from ..data.events import EventSchedule
from ..data.instance import Instance, Tour, make_tour, nearest_neighbor_tour, tour_from_positions
from ..exceptions import InvalidArgumentError
from .ants import ant_rng, choice_weights, construct_positions
from .dynamics import handle_dynamic_event
from .localsearch import steepest_descent_improve
from .pheromone import PheromoneMatrix, init_pheromone

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunResult:
    """Outcome of one seeded solver run."""

    best_tour: Tour
    best_length_per_iter: List[float]
    iterations: int
    seed: int
    solver: str = "aco"
    iteration_best_per_iter: List[float] = field(default_factory=list)
    x_per_iter: List[float] = field(default_factory=list)
    event_iterations: List[int] = field(default_factory=list)
    reinit_iterations: List[int] = field(default_factory=list)

    @property
    def final_length(self) -> float:
        return self.best_length_per_iter[-1]

    @property
    def iterations_to_best(self) -> int:
        """First iteration (1-based) whose best-so-far equals the final best."""
        final = self.final_length
        for k, length in enumerate(self.best_length_per_iter, 1):
            if abs(length - final) <= 1e-9 * max(1.0, final):
                return k
        return self.iterations


class UpdatePolicy:
    """Global pheromone update applied once per iteration."""

    name = "aco"

    def start(self, tau0: float) -> None:
        self.tau0 = tau0

    def on_city_set_change(self) -> None:
        """Lengths before and after the event are incomparable."""

    @property
    def reinforcement(self) -> float:
        return 0.0

    def update(self, ph: PheromoneMatrix, tours: Sequence[Tour], iteration_best: Tour,
               best_so_far: Tour) -> Tuple[PheromoneMatrix, bool]:
        """Return the new pheromone and whether a restart re-initialised it."""
        raise NotImplementedError


def initial_pheromone_level(inst: Instance, params: AcoParams, m: int) -> float:
    """params.tau0, or m / L_nn from the lowest-id city."""
    if params.tau0 is not None:
        return params.tau0
    return m / nearest_neighbor_tour(inst, start=min(inst.ids)).length


def _improve(inst: Instance, tours: List[Tour], best_only: bool, max_rounds: Optional[int]) -> List[Tour]:
    if best_only:
        k = int(np.argmin([t.length for t in tours]))
        tours = list(tours)
        tours[k] = steepest_descent_improve(inst, tours[k], max_rounds)
        return tours
    return [steepest_descent_improve(inst, t, max_rounds) for t in tours]


def run_colony(inst: Instance, schedule: EventSchedule, params: AcoParams, seed: int,
               policy: UpdatePolicy, tau_max: float, local_search: bool = False,
               local_search_best_only: bool = False,
               local_search_rounds: Optional[int] = None) -> RunResult:
    """
    Run max_iters colony iterations.

    Per iteration: apply due events, build m tours from one pheromone
    snapshot (ant k starts at position k mod n and samples its own PRNG
    stream), optionally improve them, update the best-so-far tour, then let
    the policy update the pheromone.
    """
    if seed < 0:
        raise InvalidArgumentError(f"Run seed must be non-negative, got {seed}")
    schedule.validate_against(inst)
    for ev in schedule.beyond(params.max_iters):
        logger.warning(f"Event at iteration {ev.at_iteration} lies beyond the {params.max_iters}-iteration budget")

    m = params.m or inst.n
    tau0 = initial_pheromone_level(inst, params, m)
    if tau_max <= tau0:
        raise InvalidArgumentError(f"tau_max ({tau_max}) must exceed tau0 ({tau0:.6g})")
    ph = init_pheromone(inst.n, tau0, tau_max, params.tau_min, ids=inst.ids)
    policy.start(tau0)

    start_time = time.perf_counter()
    logger.info(f"Starting {policy.name} run: n={inst.n}, m={m}, iters={params.max_iters}, seed={seed}")

    best: Optional[Tour] = None
    best_trace: List[float] = []
    iteration_trace: List[float] = []
    x_trace: List[float] = []
    event_iterations: List[int] = []
    reinit_iterations: List[int] = []

    for iteration in range(1, params.max_iters + 1):
        due = schedule.due(iteration)
        if due:
            for ev in due:
                ph, inst = handle_dynamic_event(ph, inst, ev, tau0)
            event_iterations.append(iteration)
            if any(ev.changes_city_set for ev in due):
                best = None
                policy.on_city_set_change()
            elif best is not None:
                best = make_tour(inst, best.order)

        weights = choice_weights(inst, ph, params)
        tours = [
            tour_from_positions(inst, construct_positions(weights, k % inst.n, ant_rng(seed, iteration, k)))
            for k in range(m)
        ]
        if local_search:
            tours = _improve(inst, tours, local_search_best_only, local_search_rounds)

        iteration_best = min(tours, key=lambda t: t.length)
        if best is None or iteration_best.length < best.length:
            best = iteration_best

        ph, reinitialised = policy.update(ph, tours, iteration_best, best)
        if reinitialised:
            reinit_iterations.append(iteration)

        best_trace.append(best.length)
        iteration_trace.append(iteration_best.length)
        x_trace.append(policy.reinforcement)
        logger.debug(f"Iteration {iteration}: iteration best {iteration_best.length:.6g}, best {best.length:.6g}")

    elapsed = time.perf_counter() - start_time
    logger.info(f"{policy.name} run seed={seed} finished in {elapsed:.2f}s, best length {best.length:.6g}")

    return RunResult(
        best_tour=best,
        best_length_per_iter=best_trace,
        iterations=params.max_iters,
        seed=seed,
        solver=policy.name,
        iteration_best_per_iter=iteration_trace,
        x_per_iter=x_trace,
        event_iterations=event_iterations,
        reinit_iterations=reinit_iterations,
    )
