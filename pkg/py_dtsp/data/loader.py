"""Instance and event-schedule file readers (native format and TSPLIB EUC_2D subset)."""

import logging
from pathlib import Path
from typing import List, Tuple, Union
from ..exceptions import InstanceFormatError, InvalidInstanceError
from .instance import City, Instance
from .events import DynamicEvent, EventSchedule

logger = logging.getLogger(__name__)

TSPLIB_KEYWORDS = ("NAME", "TYPE", "COMMENT", "DIMENSION", "EDGE_WEIGHT_TYPE", "NODE_COORD_SECTION")


def _read_lines(path: Path) -> List[str]:
    if not path.is_file():
        raise FileNotFoundError(f"Instance file not found: {path}")
    return path.read_text(encoding="utf-8").splitlines()


def _strip_comment(line: str) -> str:
    return line.split('#', 1)[0].strip()


def _is_tsplib(lines: List[str]) -> bool:
    for line in lines:
        stripped = line.strip().upper()
        if not stripped or stripped.startswith('#'):
            continue
        return stripped.startswith(TSPLIB_KEYWORDS)
    return False


def _parse_city(parts: List[str], path: Path, line_no: int) -> City:
    if len(parts) != 3:
        raise InstanceFormatError(f"expected 'id x y', got {len(parts)} fields", str(path), line_no)
    try:
        return City(id=int(parts[0]), x=float(parts[1]), y=float(parts[2]))
    except ValueError as e:
        raise InstanceFormatError(f"cannot parse city: {e}", str(path), line_no) from e


def _load_native(path: Path, lines: List[str]) -> Instance:
    entries: List[Tuple[int, str]] = [
        (no, _strip_comment(line)) for no, line in enumerate(lines, 1) if _strip_comment(line)
    ]
    if not entries:
        raise InstanceFormatError("empty instance file", str(path))

    header_no, header = entries[0]
    try:
        n = int(header)
    except ValueError as e:
        raise InstanceFormatError(f"first line must be the city count, got {header!r}", str(path), header_no) from e

    body = entries[1:]
    if len(body) != n:
        line_no = body[-1][0] if body else header_no
        raise InstanceFormatError(f"declared {n} cities, found {len(body)}", str(path), line_no)

    cities = [_parse_city(text.split(), path, no) for no, text in body]
    return Instance.from_cities(cities, metric="euclidean", name=path.stem)


def _load_tsplib(path: Path, lines: List[str]) -> Instance:
    header = {}
    cities: List[City] = []
    in_coords = False

    for no, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line:
            continue
        if line.upper() == "EOF":
            break
        if in_coords:
            cities.append(_parse_city(line.split(), path, no))
            continue
        if line.upper().startswith("NODE_COORD_SECTION"):
            in_coords = True
            continue
        if ':' not in line:
            raise InstanceFormatError(f"expected 'KEY : VALUE', got {line!r}", str(path), no)
        key, value = line.split(':', 1)
        header[key.strip().upper()] = (value.strip(), no)

    type_value, type_no = header.get("TYPE", ("TSP", 0))
    if type_value.upper() != "TSP":
        raise InstanceFormatError(f"unsupported TYPE {type_value}", str(path), type_no)
    if "EDGE_WEIGHT_TYPE" not in header:
        raise InstanceFormatError("missing EDGE_WEIGHT_TYPE", str(path))
    ewt, ewt_no = header["EDGE_WEIGHT_TYPE"]
    if ewt.upper() != "EUC_2D":
        raise InstanceFormatError(f"unsupported EDGE_WEIGHT_TYPE {ewt}", str(path), ewt_no)
    if not in_coords:
        raise InstanceFormatError("missing NODE_COORD_SECTION", str(path))
    if "DIMENSION" in header:
        dim_value, dim_no = header["DIMENSION"]
        try:
            dimension = int(dim_value)
        except ValueError as e:
            raise InstanceFormatError(f"bad DIMENSION {dim_value!r}", str(path), dim_no) from e
        if dimension != len(cities):
            raise InstanceFormatError(
                f"DIMENSION {dimension} does not match {len(cities)} coordinates", str(path), dim_no
            )

    name = header.get("NAME", (path.stem, 0))[0]
    return Instance.from_cities(cities, metric="euc_2d", name=name)


def load_instance(path: Union[str, Path]) -> Instance:
    """
    Load an instance file.

    Native files (first line N, then 'id x y' lines) keep exact Euclidean
    distances; TSPLIB EUC_2D files use nearest-integer rounding.
    """
    path = Path(path)
    lines = _read_lines(path)

    try:
        if _is_tsplib(lines):
            inst = _load_tsplib(path, lines)
        else:
            inst = _load_native(path, lines)
    except InvalidInstanceError as e:
        raise InvalidInstanceError(f"{path}: {e}") from e

    logger.info(f"Loaded instance {inst.name} ({inst.n} cities, {inst.metric}) from {path}")
    return inst


def _parse_event(parts: List[str], path: Path, line_no: int) -> DynamicEvent:
    try:
        at_iteration = int(parts[0])
        kind = parts[1].lower()
        if kind == "remove" and len(parts) == 3:
            return DynamicEvent.remove(at_iteration, int(parts[2]))
        if kind in ("insert", "move") and len(parts) == 5:
            return DynamicEvent(at_iteration, kind, int(parts[2]), float(parts[3]), float(parts[4]))
    except (ValueError, IndexError) as e:
        raise InstanceFormatError(f"cannot parse event: {e}", str(path), line_no) from e
    raise InstanceFormatError(
        "expected 'iter insert id x y', 'iter remove id' or 'iter move id x y'", str(path), line_no
    )


def load_event_schedule(path: Union[str, Path]) -> EventSchedule:
    """Load an event schedule file."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Event schedule not found: {path}")

    events = []
    for no, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = _strip_comment(raw)
        if line:
            events.append(_parse_event(line.split(), path, no))

    logger.info(f"Loaded {len(events)} dynamic events from {path}")
    return EventSchedule.of(events)


def save_instance(inst: Instance, path: Union[str, Path]) -> Path:
    """Write an instance in the native format (repr-exact coordinates)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [str(inst.n)] + [f"{c.id} {c.x!r} {c.y!r}" for c in inst.cities]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
