"""Steepest-descent 2-opt tour improvement."""

import logging
from dataclasses import dataclass
from typing import Optional
import numpy as np
from ..data.instance import Instance, Tour, tour_from_positions, tour_length
from ..exceptions import InvalidArgumentError

logger = logging.getLogger(__name__)

IMPROVEMENT_THRESHOLD = -1e-9


@dataclass(frozen=True)
class ReconnectMove:
    """Reverse order[i+1..j]; delta is the resulting length change."""

    i: int
    j: int
    delta: float


def _positions(inst: Instance, tour: Tour) -> np.ndarray:
    tour_length(inst, tour.order)
    return inst.positions(tour.order)


def _delta_matrix(dist: np.ndarray, pos: np.ndarray) -> np.ndarray:
    """Length change of every move (i, j), i < j; +inf elsewhere."""
    nxt = np.roll(pos, -1)
    edge = dist[pos, nxt]
    delta = dist[np.ix_(pos, pos)] + dist[np.ix_(nxt, nxt)] - edge[:, None] - edge[None, :]
    n = pos.shape[0]
    delta[np.tril_indices(n)] = np.inf
    return delta


def _edge_delta(dist: np.ndarray, pos: np.ndarray, i: int, j: int) -> float:
    n = pos.shape[0]
    a, b = pos[i], pos[(i + 1) % n]
    c, d = pos[j], pos[(j + 1) % n]
    return float(dist[a, c] + dist[b, d] - dist[a, b] - dist[c, d])


def move_delta(inst: Instance, tour: Tour, i: int, j: int) -> ReconnectMove:
    """Build the move (i, j) for tour with its incrementally computed delta."""
    pos = _positions(inst, tour)
    if not 0 <= i < j < pos.shape[0]:
        raise InvalidArgumentError(f"Move indices need 0 <= i < j < {pos.shape[0]}, got ({i}, {j})")
    return ReconnectMove(i, j, _edge_delta(inst.dist, pos, i, j))


def apply_2opt_move(tour: Tour, move: ReconnectMove, inst: Instance) -> Tour:
    """Reverse the segment [i+1..j] of tour."""
    n = len(tour.order)
    if not 0 <= move.i < move.j < n:
        raise InvalidArgumentError(f"Move indices need 0 <= i < j < {n}, got ({move.i}, {move.j})")
    pos = _positions(inst, tour)
    delta = _edge_delta(inst.dist, pos, move.i, move.j)
    if abs(delta - move.delta) > 1e-9 * max(1.0, tour.length):
        raise InvalidArgumentError(f"Move delta {move.delta} is stale for this tour (actual {delta})")

    order = tour.order[:move.i + 1] + tour.order[move.i + 1:move.j + 1][::-1] + tour.order[move.j + 1:]
    return Tour(order=order, length=tour.length + delta)


def _best_move(dist: np.ndarray, pos: np.ndarray) -> Optional[ReconnectMove]:
    if pos.shape[0] < 4:
        return None
    delta = _delta_matrix(dist, pos)
    flat = int(np.argmin(delta))
    i, j = divmod(flat, pos.shape[0])
    if delta[i, j] < IMPROVEMENT_THRESHOLD:
        return ReconnectMove(int(i), int(j), float(delta[i, j]))
    return None


def best_reconnection(inst: Instance, tour: Tour) -> Optional[ReconnectMove]:
    """
    Steepest 2-opt move of tour, or None when no move improves by more than 1e-9.

    Ties go to the lexicographically smallest (i, j).
    """
    return _best_move(inst.dist, _positions(inst, tour))


def steepest_descent_improve(inst: Instance, tour: Tour, max_rounds: Optional[int] = None) -> Tour:
    """
    Apply best_reconnection until no improving move remains or max_rounds is hit.

    Returns the input tour unchanged when it is already 2-opt optimal.
    """
    pos = _positions(inst, tour)
    if max_rounds is None:
        max_rounds = 10 * inst.n

    rounds = 0
    while rounds < max_rounds:
        move = _best_move(inst.dist, pos)
        if move is None:
            break
        pos[move.i + 1:move.j + 1] = pos[move.i + 1:move.j + 1][::-1].copy()
        rounds += 1

    if rounds == 0:
        return tour
    if rounds == max_rounds:
        logger.debug(f"2-opt descent stopped at the {max_rounds}-round cap")
    return tour_from_positions(inst, pos)
