"""Static TSP instances, Euclidean distances and tours."""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Literal, Optional, Sequence, Tuple
import numpy as np
from ..exceptions import InvalidArgumentError, InvalidInstanceError, InvalidTourError

logger = logging.getLogger(__name__)

Metric = Literal["euclidean", "euc_2d"]

MIN_CITIES = 3


@dataclass(frozen=True)
class City:
    """A city with a stable id and Cartesian coordinates."""

    id: int
    x: float
    y: float


def _distances_from(point: np.ndarray, coords: np.ndarray, metric: Metric) -> np.ndarray:
    """Distances from one point to every row of coords."""
    diff = coords - point
    d = np.hypot(diff[:, 0], diff[:, 1])
    if metric == "euc_2d":
        # TSPLIB nint()
        d = np.floor(d + 0.5)
    return d


def pairwise_distances(coords: np.ndarray, metric: Metric = "euclidean") -> np.ndarray:
    """Full symmetric distance matrix for an (n, 2) coordinate array."""
    diff = coords[:, None, :] - coords[None, :, :]
    d = np.hypot(diff[..., 0], diff[..., 1])
    if metric == "euc_2d":
        d = np.floor(d + 0.5)
    np.fill_diagonal(d, 0.0)
    return d


@dataclass(frozen=True, eq=False)
class Instance:
    """
    Ordered city set plus its symmetric distance matrix.

    dist is indexed by city position, not id; index_of maps ids to positions.
    Instances are immutable: the matrix is marked read-only.
    """

    cities: Tuple[City, ...]
    dist: np.ndarray
    metric: Metric = "euclidean"
    name: str = ""
    index_of: Dict[int, int] = field(init=False, repr=False)

    def __post_init__(self):
        n = len(self.cities)
        if n < MIN_CITIES:
            raise InvalidInstanceError(f"Instance needs at least {MIN_CITIES} cities, got {n}")

        index_of = {}
        for pos, city in enumerate(self.cities):
            if city.id in index_of:
                raise InvalidInstanceError(f"Duplicate city id {city.id}")
            if not (np.isfinite(city.x) and np.isfinite(city.y)):
                raise InvalidInstanceError(f"City {city.id} has non-finite coordinates")
            index_of[city.id] = pos

        dist = np.array(self.dist, dtype=float)
        if dist.shape != (n, n):
            raise InvalidInstanceError(f"Distance matrix shape {dist.shape} does not match {n} cities")
        if not np.array_equal(dist, dist.T):
            raise InvalidInstanceError("Distance matrix is not symmetric")
        if np.any(np.diag(dist) != 0):
            raise InvalidInstanceError("Distance matrix diagonal must be zero")
        off_diagonal = dist[~np.eye(n, dtype=bool)]
        if np.any(off_diagonal <= 0):
            i, j = np.argwhere((dist <= 0) & ~np.eye(n, dtype=bool))[0]
            raise InvalidInstanceError(
                f"Cities {self.cities[i].id} and {self.cities[j].id} are coincident"
            )

        dist.flags.writeable = False
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "index_of", index_of)

    @classmethod
    def from_cities(cls, cities: Iterable[City], metric: Metric = "euclidean", name: str = "") -> "Instance":
        """Build an instance, computing the distance matrix from coordinates."""
        cities = tuple(cities)
        coords = np.array([(c.x, c.y) for c in cities], dtype=float).reshape(-1, 2)
        return cls(cities=cities, dist=pairwise_distances(coords, metric), metric=metric, name=name)

    @property
    def n(self) -> int:
        return len(self.cities)

    @property
    def ids(self) -> Tuple[int, ...]:
        return tuple(c.id for c in self.cities)

    @property
    def coords(self) -> np.ndarray:
        return np.array([(c.x, c.y) for c in self.cities], dtype=float)

    def positions(self, order: Sequence[int]) -> np.ndarray:
        """Map a sequence of city ids to matrix positions."""
        try:
            return np.fromiter((self.index_of[c] for c in order), dtype=np.intp, count=len(order))
        except KeyError as e:
            raise InvalidTourError(f"Unknown city id {e.args[0]}") from e

    def distance_row(self, point: Tuple[float, float]) -> np.ndarray:
        """Distances from an arbitrary point to every city, in this instance's metric."""
        return _distances_from(np.asarray(point, dtype=float), self.coords, self.metric)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.cities == other.cities
            and self.metric == other.metric
            and np.array_equal(self.dist, other.dist)
        )

    def __hash__(self):
        return hash((self.cities, self.metric))


@dataclass(frozen=True)
class Tour:
    """A closed tour: a permutation of the current city ids and its cached length."""

    order: Tuple[int, ...]
    length: float

    def __len__(self) -> int:
        return len(self.order)


def _cycle_length(inst: Instance, pos: np.ndarray) -> float:
    return float(inst.dist[pos, np.roll(pos, -1)].sum())


def tour_length(inst: Instance, order: Sequence[int]) -> float:
    """
    Length of the closed cycle visiting order.

    Args:
        inst: Instance the ids belong to
        order: Permutation of inst's current city ids

    Returns:
        Sum of consecutive distances including the closing edge
    """
    if len(order) != inst.n or set(order) != set(inst.index_of):
        raise InvalidTourError(
            f"Order of {len(order)} ids is not a permutation of the {inst.n} current cities"
        )
    return _cycle_length(inst, inst.positions(order))


def make_tour(inst: Instance, order: Sequence[int]) -> Tour:
    """Validate order against inst and wrap it with its length."""
    order = tuple(int(c) for c in order)
    return Tour(order=order, length=tour_length(inst, order))


def tour_from_positions(inst: Instance, pos: np.ndarray) -> Tour:
    """Build a Tour from matrix positions (internal solvers work on positions)."""
    order = tuple(inst.cities[p].id for p in pos)
    return Tour(order=order, length=_cycle_length(inst, np.asarray(pos, dtype=np.intp)))


def generate_random_instance(n: int, bbox: Tuple[float, float] = (100.0, 100.0),
                             seed: int = 0) -> Instance:
    """
    Draw n cities uniformly in [0, width] x [0, height].

    The result is a pure function of (n, bbox, seed).
    """
    if n < MIN_CITIES:
        raise InvalidInstanceError(f"Instance needs at least {MIN_CITIES} cities, got {n}")
    width, height = bbox
    if width <= 0 or height <= 0:
        raise InvalidArgumentError(f"Bounding box dimensions must be positive, got {bbox}")

    rng = np.random.default_rng(seed)
    xs = rng.uniform(0.0, width, n)
    ys = rng.uniform(0.0, height, n)
    cities = [City(id=i, x=float(x), y=float(y)) for i, (x, y) in enumerate(zip(xs, ys))]

    logger.debug(f"Generated random instance n={n} bbox={bbox} seed={seed}")
    return Instance.from_cities(cities, name=f"random-{n}-{seed}")


def nearest_neighbor_tour(inst: Instance, start: Optional[int] = None,
                          seed: Optional[int] = None) -> Tour:
    """
    Greedy nearest-unvisited construction.

    Args:
        inst: Instance to tour
        start: Starting city id; drawn from seed when None
        seed: PRNG seed for the start city

    Returns:
        Nearest-neighbour tour; distance ties go to the lowest city id
    """
    if start is None:
        rng = np.random.default_rng(seed)
        start = inst.ids[int(rng.integers(inst.n))]
    if start not in inst.index_of:
        raise InvalidArgumentError(f"Unknown start city id {start}")

    ids = np.array(inst.ids)
    visited = np.zeros(inst.n, dtype=bool)
    current = inst.index_of[start]
    visited[current] = True
    path = [current]

    for _ in range(inst.n - 1):
        d = np.where(visited, np.inf, inst.dist[current])
        nearest = np.flatnonzero(d == d.min())
        current = int(nearest[np.argmin(ids[nearest])])
        visited[current] = True
        path.append(current)

    return tour_from_positions(inst, np.array(path, dtype=np.intp))
