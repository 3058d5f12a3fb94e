"""Exception hierarchy shared by the library, the CLI and the service."""

from typing import Optional


class WeakValueError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(WeakValueError):
    """Invalid configuration or command-line input."""


class ModelError(WeakValueError):
    """Dispersion model cannot support the requested operation."""


class DomainError(WeakValueError):
    """Requested quantity has no admissible solution."""


class ContractError(WeakValueError):
    """An input violates an evaluation contract (e.g. a non-unitary family)."""


class SingularityError(WeakValueError):
    """Evaluation point is at or too near a zero of the response."""

    def __init__(self, message: str, magnitude: Optional[float] = None):
        super().__init__(message)
        self.magnitude = magnitude


class StepTooCoarseError(WeakValueError):
    """Phase changes by more than pi/2 between stencil points."""


class ConvergenceError(WeakValueError):
    """Iterative refinement did not converge."""


class DegenerateZeroError(WeakValueError):
    """Jacobian is singular at the zero (higher-order zero)."""


class LoopError(WeakValueError):
    """Closed loop passes too near a zero of the response."""


class DataError(WeakValueError):
    """Tabulated data cannot support the requested analysis."""


class FormatError(WeakValueError):
    """File content is well-formed but violates a format invariant."""


class ParseError(FormatError):
    """File content cannot be parsed."""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
