"""Exception hierarchy shared by all py-dtsp modules."""

from typing import Optional, Sequence


class DtspError(Exception):
    """Base class for every error raised by py-dtsp."""


class ConfigFileError(DtspError, ValueError):
    """Experiment configuration file is missing or malformed."""


class InvalidInstanceError(DtspError, ValueError):
    """Instance violates a structural invariant (size, duplicate ids, coincident cities)."""


class InstanceFormatError(DtspError, ValueError):
    """Instance or event file could not be parsed."""

    def __init__(self, message: str, path: Optional[str] = None, line_no: Optional[int] = None):
        location = ""
        if path is not None:
            location = f"{path}"
            if line_no is not None:
                location += f":{line_no}"
            location += ": "
        super().__init__(f"{location}{message}")
        self.path = path
        self.line_no = line_no


class InvalidTourError(DtspError, ValueError):
    """Order is not a permutation of the instance's current city ids."""


class EventApplicationError(DtspError, ValueError):
    """Dynamic event references a missing city, duplicates one, or shrinks the instance too far."""


class InvalidArgumentError(DtspError, ValueError):
    """Argument outside its documented domain."""


class NumericalFailureError(DtspError, ArithmeticError):
    """Non-finite value encountered while evaluating a field or its gradient."""

    def __init__(self, message: str, point: Optional[Sequence[float]] = None):
        super().__init__(message if point is None else f"{message} at x={list(point)}")
        self.point = None if point is None else list(point)


class OutputFileError(DtspError, OSError):
    """Artefact could not be written."""

    def __init__(self, message: str, path: str):
        super().__init__(f"{message}: {path}")
        self.path = path


class InvalidComparisonError(DtspError, ValueError):
    """Two experiment configs do not share instance, events and seeds."""


class RunFailedError(DtspError, RuntimeError):
    """A solver run inside a batch failed."""

    def __init__(self, message: str, run_index: int, seed: int):
        super().__init__(f"run {run_index} (seed {seed}) failed: {message}")
        self.run_index = run_index
        self.seed = seed
