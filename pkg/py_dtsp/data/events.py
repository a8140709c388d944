"""Dynamic event schedule: time-indexed insert/remove/move of cities."""

import logging
from dataclasses import dataclass
from typing import Iterator, List, Literal, Optional, Sequence, Tuple
import numpy as np
from ..exceptions import EventApplicationError, InvalidArgumentError, InvalidInstanceError
from .instance import City, Instance, MIN_CITIES

logger = logging.getLogger(__name__)

EventKind = Literal["insert", "remove", "move"]


@dataclass(frozen=True)
class DynamicEvent:
    """A change of the city set applied at the start of iteration at_iteration."""

    at_iteration: int
    kind: EventKind
    city_id: int
    x: Optional[float] = None
    y: Optional[float] = None

    def __post_init__(self):
        if self.at_iteration < 1:
            raise InvalidArgumentError(f"Event iteration must be >= 1, got {self.at_iteration}")
        if self.kind not in ("insert", "remove", "move"):
            raise InvalidArgumentError(f"Unknown event kind {self.kind!r}")
        if self.kind in ("insert", "move") and (self.x is None or self.y is None):
            raise InvalidArgumentError(f"{self.kind} event for city {self.city_id} needs coordinates")

    @classmethod
    def insert(cls, at_iteration: int, city: City) -> "DynamicEvent":
        return cls(at_iteration, "insert", city.id, city.x, city.y)

    @classmethod
    def remove(cls, at_iteration: int, city_id: int) -> "DynamicEvent":
        return cls(at_iteration, "remove", city_id)

    @classmethod
    def move(cls, at_iteration: int, city_id: int, x: float, y: float) -> "DynamicEvent":
        return cls(at_iteration, "move", city_id, x, y)

    @property
    def changes_city_set(self) -> bool:
        return self.kind != "move"


@dataclass(frozen=True)
class EventSchedule:
    """Events ordered by iteration; ties keep their list order."""

    events: Tuple[DynamicEvent, ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted(self.events, key=lambda ev: ev.at_iteration))
        object.__setattr__(self, "events", ordered)

    @classmethod
    def empty(cls) -> "EventSchedule":
        return cls(())

    @classmethod
    def of(cls, events: Sequence[DynamicEvent]) -> "EventSchedule":
        return cls(tuple(events))

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[DynamicEvent]:
        return iter(self.events)

    def due(self, iteration: int) -> List[DynamicEvent]:
        """Events to apply at the start of the given iteration."""
        return [ev for ev in self.events if ev.at_iteration == iteration]

    def beyond(self, max_iters: int) -> List[DynamicEvent]:
        """Events that a run of max_iters iterations never reaches."""
        return [ev for ev in self.events if ev.at_iteration > max_iters]

    def validate_against(self, inst: Instance) -> None:
        """Replay the id set over the whole schedule; raise on the first invalid event."""
        present = set(inst.ids)
        for ev in self.events:
            _check_reference(ev, present)
            if ev.kind == "insert":
                present.add(ev.city_id)
            elif ev.kind == "remove":
                present.discard(ev.city_id)


def _check_reference(ev: DynamicEvent, present) -> None:
    if ev.kind == "insert":
        if ev.city_id in present:
            raise EventApplicationError(
                f"Iteration {ev.at_iteration}: cannot insert city {ev.city_id}, id already present"
            )
        return
    if ev.city_id not in present:
        raise EventApplicationError(
            f"Iteration {ev.at_iteration}: cannot {ev.kind} city {ev.city_id}, id not present"
        )
    if ev.kind == "remove" and len(present) - 1 < MIN_CITIES:
        raise EventApplicationError(
            f"Iteration {ev.at_iteration}: removing city {ev.city_id} would leave fewer than "
            f"{MIN_CITIES} cities"
        )


def apply_event(inst: Instance, ev: DynamicEvent) -> Instance:
    """
    Produce the instance after ev.

    Only the rows/columns of the affected city are recomputed; every other
    distance is copied bit-for-bit. Inserted cities are appended last.
    """
    _check_reference(ev, inst.index_of)

    if ev.x is not None and not (np.isfinite(ev.x) and np.isfinite(ev.y)):
        raise EventApplicationError(f"Iteration {ev.at_iteration}: non-finite coordinates for city {ev.city_id}")

    n = inst.n
    if ev.kind == "insert":
        cities = inst.cities + (City(ev.city_id, float(ev.x), float(ev.y)),)
        row = inst.distance_row((ev.x, ev.y))
        dist = np.zeros((n + 1, n + 1))
        dist[:n, :n] = inst.dist
        dist[n, :n] = row
        dist[:n, n] = row
    elif ev.kind == "remove":
        pos = inst.index_of[ev.city_id]
        cities = inst.cities[:pos] + inst.cities[pos + 1:]
        dist = np.delete(np.delete(inst.dist, pos, axis=0), pos, axis=1)
    else:
        pos = inst.index_of[ev.city_id]
        cities = inst.cities[:pos] + (City(ev.city_id, float(ev.x), float(ev.y)),) + inst.cities[pos + 1:]
        row = inst.distance_row((ev.x, ev.y))
        row[pos] = 0.0
        dist = np.array(inst.dist)
        dist[pos, :] = row
        dist[:, pos] = row

    try:
        updated = Instance(cities=cities, dist=dist, metric=inst.metric, name=inst.name)
    except InvalidInstanceError as e:
        raise EventApplicationError(f"Iteration {ev.at_iteration}: {e}") from e

    logger.debug(f"Applied {ev.kind} of city {ev.city_id} at iteration {ev.at_iteration}, n={updated.n}")
    return updated
