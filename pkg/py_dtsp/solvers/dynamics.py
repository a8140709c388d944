"""Keeping pheromone aligned with a changing city set."""

import logging
from typing import Tuple
import numpy as np
from ..data.events import DynamicEvent, apply_event
from ..data.instance import Instance
from ..exceptions import InvalidArgumentError
from .pheromone import PheromoneMatrix

logger = logging.getLogger(__name__)


def handle_dynamic_event(ph: PheromoneMatrix, inst: Instance, ev: DynamicEvent,
                         tau0: float) -> Tuple[PheromoneMatrix, Instance]:
    """
    Apply ev to inst and reshape ph to match.

    Removed cities lose their row and column, inserted or moved cities get
    tau0 on every incident edge; all other entries are kept as they are.
    """
    if ph.ids != inst.ids:
        raise InvalidArgumentError("Pheromone matrix does not track the instance's current cities")

    updated = apply_event(inst, ev)
    level = min(max(tau0, ph.tau_min), ph.tau_max)
    n = inst.n

    if ev.kind == "insert":
        tau = np.full((n + 1, n + 1), level)
        tau[:n, :n] = ph.tau
    elif ev.kind == "remove":
        pos = inst.index_of[ev.city_id]
        tau = np.delete(np.delete(ph.tau, pos, axis=0), pos, axis=1)
    else:
        pos = inst.index_of[ev.city_id]
        tau = np.array(ph.tau)
        tau[pos, :] = level
        tau[:, pos] = level

    logger.info(f"Dynamic event at iteration {ev.at_iteration}: {ev.kind} city {ev.city_id} (n={updated.n})")
    return PheromoneMatrix(tau=tau, tau_min=ph.tau_min, tau_max=ph.tau_max, ids=updated.ids), updated
