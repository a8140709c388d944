"""Pheromone state and the Ant System evaporation / deposit rules."""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple
import numpy as np
from ..data.instance import Tour
from ..exceptions import InvalidArgumentError, InvalidTourError

logger = logging.getLogger(__name__)

DEFAULT_TAU_MIN = 1e-9


@dataclass(frozen=True, eq=False)
class PheromoneMatrix:
    """
    Symmetric edge pheromone over the current cities.

    Row/column k belongs to city ids[k], matching the instance's position
    order. Off-diagonal entries stay in [tau_min, tau_max]; the diagonal is 0.
    """

    tau: np.ndarray
    tau_min: float
    tau_max: float
    ids: Tuple[int, ...]
    index_of: Dict[int, int] = field(init=False, repr=False)

    def __post_init__(self):
        tau = np.array(self.tau, dtype=float)
        n = len(self.ids)
        if tau.shape != (n, n):
            raise InvalidArgumentError(f"Pheromone shape {tau.shape} does not match {n} cities")
        if self.tau_min < 0 or self.tau_max <= self.tau_min:
            raise InvalidArgumentError(
                f"Pheromone bounds need 0 <= tau_min < tau_max, got [{self.tau_min}, {self.tau_max}]"
            )
        np.fill_diagonal(tau, 0.0)
        tau.flags.writeable = False
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "index_of", {c: k for k, c in enumerate(self.ids)})

    @property
    def n(self) -> int:
        return len(self.ids)

    def with_tau(self, tau: np.ndarray) -> "PheromoneMatrix":
        return PheromoneMatrix(tau=tau, tau_min=self.tau_min, tau_max=self.tau_max, ids=self.ids)

    def edge(self, a: int, b: int) -> float:
        """Pheromone on the edge between city ids a and b."""
        return float(self.tau[self.index_of[a], self.index_of[b]])

    def off_diagonal(self) -> np.ndarray:
        return self.tau[~np.eye(self.n, dtype=bool)]

    def tour_positions(self, tour: Tour) -> np.ndarray:
        """Positions of a tour's cities, checking it covers exactly these cities."""
        if len(tour.order) != self.n or set(tour.order) != set(self.index_of):
            raise InvalidTourError(f"Tour of {len(tour.order)} cities does not match the {self.n} current cities")
        if tour.length <= 0:
            raise InvalidTourError(f"Tour length must be positive, got {tour.length}")
        return np.fromiter((self.index_of[c] for c in tour.order), dtype=np.intp, count=self.n)


def init_pheromone(n: int, tau0: float, tau_max: float, tau_min: float = DEFAULT_TAU_MIN,
                   ids: Optional[Sequence[int]] = None) -> PheromoneMatrix:
    """Uniform tau0 on every edge of an n-city matrix."""
    if n < 3:
        raise InvalidArgumentError(f"Pheromone matrix needs at least 3 cities, got {n}")
    if tau0 <= 0:
        raise InvalidArgumentError(f"tau0 must be positive, got {tau0}")
    if tau0 > tau_max:
        raise InvalidArgumentError(f"tau0 ({tau0}) exceeds tau_max ({tau_max})")
    ids = tuple(range(n)) if ids is None else tuple(ids)
    return PheromoneMatrix(tau=np.full((n, n), float(tau0)), tau_min=tau_min, tau_max=tau_max, ids=ids)


def evaporate(ph: PheromoneMatrix, rho: float) -> PheromoneMatrix:
    """Multiply every edge by (1 - rho), then floor at tau_min."""
    if not 0 < rho < 1:
        raise InvalidArgumentError(f"rho must lie in (0, 1), got {rho}")
    return ph.with_tau(np.maximum(ph.tau * (1.0 - rho), ph.tau_min))


def edge_deltas(ph: PheromoneMatrix, tours: Sequence[Tour], q: float) -> np.ndarray:
    """Sum over ants of q / L_k on each edge the ant used, symmetric."""
    delta = np.zeros((ph.n, ph.n))
    for tour in tours:
        pos = ph.tour_positions(tour)
        nxt = np.roll(pos, -1)
        amount = q / tour.length
        np.add.at(delta, (pos, nxt), amount)
        np.add.at(delta, (nxt, pos), amount)
    return delta


def deposit(ph: PheromoneMatrix, tours: Sequence[Tour], q: float) -> PheromoneMatrix:
    """
    Lay q / L_k on every edge of each ant's tour, then clamp to tau_max.

    Deposits are summed in the order tours are given (ant index order).
    """
    if q <= 0:
        raise InvalidArgumentError(f"q must be positive, got {q}")
    return ph.with_tau(np.minimum(ph.tau + edge_deltas(ph, tours, q), ph.tau_max))
