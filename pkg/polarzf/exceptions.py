"""Exception hierarchy.

Every exception carries the exit code the command line maps it to.
"""

from __future__ import annotations


class PolarZFError(Exception):
    """Base class for all polarzf errors."""

    exit_code: int = 1


class ScenarioParseError(PolarZFError):
    """A scenario or design file could not be read as a key/value document."""

    exit_code = 2

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        location = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{location}")


class ScenarioValidationError(PolarZFError):
    """A parsed scenario violates an invariant."""

    exit_code = 2

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        prefix = f"{field}: " if field else ""
        super().__init__(f"{prefix}{message}")


class DegenerateGeometryError(PolarZFError):
    """A transmitter and a receiver share the same position."""

    exit_code = 2


class NonGenericGeometryError(PolarZFError):
    """No placement met the requested genericity margin."""

    exit_code = 2


class DegenerateDirectionError(PolarZFError):
    """Two nulling directions coincide modulo pi."""

    exit_code = 2


class InfeasibleAssignmentError(PolarZFError):
    """The nulling assignment leaves cross links unassigned."""

    exit_code = 3


class InfeasibleNullingError(PolarZFError):
    """A node has fewer than the required free dimensions after nulling."""

    exit_code = 3


class CertificateViolationError(PolarZFError):
    """A design fails its leakage or orthonormality certificate."""

    exit_code = 4
