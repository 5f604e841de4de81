"""Exception types shared across the package.

Domain errors (unknown ids, partition conflicts, malformed edge lists)
derive from SessionRecError so callers can catch the whole family; config
and usage problems are ConfigError and map to a distinct CLI exit code.
"""

from __future__ import annotations


class SessionRecError(Exception):
    """Base class for all domain errors raised by this package."""


class UnknownClassError(SessionRecError):
    """An arc referenced a class id that is not declared in the class table."""

    def __init__(self, class_id: int):
        super().__init__(f"kernel class {class_id} is not declared")
        self.class_id = class_id


class KernelClassConflictError(SessionRecError):
    """A kernel was seen under two different classes; classes partition kernels."""

    def __init__(self, kernel: int, existing: int, conflicting: int):
        super().__init__(
            f"kernel {kernel} already belongs to class {existing}, "
            f"cannot also belong to class {conflicting}"
        )
        self.kernel = kernel
        self.existing = existing
        self.conflicting = conflicting


class KernelNotFoundError(SessionRecError):
    def __init__(self, kernel: int):
        super().__init__(f"kernel {kernel} not found")
        self.kernel = kernel


class ObjectNotFoundError(SessionRecError):
    """The object is absent from the snapshot or has no incident arc."""

    def __init__(self, object_id: int | str):
        super().__init__(f"object {object_id} not found")
        self.object_id = object_id


class EdgeListFormatError(SessionRecError):
    """A persisted edge list violated the canonical format."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class ConfigError(SessionRecError):
    """Invalid configuration: bad source spec, unknown format tag, empty source set."""


class RebuildBusyError(SessionRecError):
    """A rebuild was requested while another rebuild is still running."""

    def __init__(self) -> None:
        super().__init__("a rebuild is already in progress")
