"""Ant state and the probabilistic state-transition rule."""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Tuple
import numpy as np
from ..config.experiment_config import AcoParams
from ..data.instance import Instance, Tour, tour_from_positions
from ..exceptions import InvalidArgumentError
from .pheromone import PheromoneMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AntState:
    """An ant part-way through its tour."""

    current: int
    visited: FrozenSet[int]
    path: Tuple[int, ...]

    @classmethod
    def at(cls, city_id: int) -> "AntState":
        return cls(current=city_id, visited=frozenset((city_id,)), path=(city_id,))

    def moved_to(self, city_id: int) -> "AntState":
        return AntState(current=city_id, visited=self.visited | {city_id}, path=self.path + (city_id,))

    def allowed(self, inst: Instance) -> Tuple[int, ...]:
        """Current cities the ant has not visited yet, in instance order."""
        return tuple(c for c in inst.ids if c not in self.visited)


def _check_alignment(inst: Instance, ph: PheromoneMatrix) -> None:
    if ph.ids != inst.ids:
        raise InvalidArgumentError("Pheromone matrix does not track the instance's current cities")


def choice_weights(inst: Instance, ph: PheromoneMatrix, params: AcoParams) -> np.ndarray:
    """tau^alpha * eta^beta for every edge, eta = 1/d; diagonal 0."""
    _check_alignment(inst, ph)
    n = inst.n
    off = ~np.eye(n, dtype=bool)
    eta = np.zeros((n, n))
    eta[off] = 1.0 / inst.dist[off]
    with np.errstate(over="ignore"):
        weights = np.power(ph.tau, params.alpha) * np.power(eta, params.beta)
    weights[~off] = 0.0
    return weights


def _row_distribution(weights_row: np.ndarray, visited: np.ndarray) -> np.ndarray:
    w = np.where(visited, 0.0, weights_row)
    total = w.sum()
    if total > 0 and np.isfinite(total):
        return w / total
    # All numerators vanished (or overflowed): uniform over the allowed set
    allowed = ~visited
    return allowed / allowed.sum()


def transition_probabilities(inst: Instance, ph: PheromoneMatrix, ant: AntState,
                             params: AcoParams) -> Dict[int, float]:
    """
    Probability of moving from ant.current to each allowed city.

    Returns an empty mapping when no city is left (the tour is complete).
    """
    _check_alignment(inst, ph)
    visited = np.array([c in ant.visited for c in inst.ids])
    if visited.all():
        return {}

    i = inst.index_of[ant.current]
    with np.errstate(over="ignore"):
        eta = np.zeros(inst.n)
        others = np.arange(inst.n) != i
        eta[others] = 1.0 / inst.dist[i, others]
        row = np.power(ph.tau[i], params.alpha) * np.power(eta, params.beta)
    row[i] = 0.0

    p = _row_distribution(row, visited)
    return {c: float(p[k]) for k, c in enumerate(inst.ids) if not visited[k]}


def construct_positions(weights: np.ndarray, start: int, rng: np.random.Generator) -> np.ndarray:
    """Roulette-wheel construction over a weight snapshot, returning matrix positions."""
    n = weights.shape[0]
    visited = np.zeros(n, dtype=bool)
    path = np.empty(n, dtype=np.intp)
    path[0] = start
    visited[start] = True
    current = start

    for step in range(1, n):
        w = np.where(visited, 0.0, weights[current])
        cumulative = np.cumsum(w)
        total = cumulative[-1]
        if total > 0 and np.isfinite(total):
            nxt = int(np.searchsorted(cumulative, rng.random() * total, side="right"))
            if nxt >= n or visited[nxt]:
                nxt = int(np.flatnonzero(w > 0)[-1])
        else:
            candidates = np.flatnonzero(~visited)
            nxt = int(candidates[rng.integers(candidates.shape[0])])
        path[step] = nxt
        visited[nxt] = True
        current = nxt

    return path


def construct_tour(inst: Instance, ph: PheromoneMatrix, start: int, params: AcoParams,
                   rng: np.random.Generator) -> Tour:
    """
    Build one ant's closed tour from start by repeated roulette sampling.

    Args:
        inst: Current instance
        ph: Pheromone snapshot aligned with inst
        start: Starting city id
        params: alpha / beta exponents
        rng: The ant's PRNG stream

    Returns:
        Complete tour
    """
    if start not in inst.index_of:
        raise InvalidArgumentError(f"Unknown start city id {start}")
    weights = choice_weights(inst, ph, params)
    return tour_from_positions(inst, construct_positions(weights, inst.index_of[start], rng))


def ant_rng(seed: int, iteration: int, ant: int) -> np.random.Generator:
    """Independent stream per (run seed, iteration, ant index)."""
    return np.random.default_rng([seed, iteration, ant])
