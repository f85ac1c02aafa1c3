from typing import Optional


class ToolkitError(Exception):
    """Base class for every failure raised by the numerical engines."""


class DomainError(ToolkitError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnsupportedSpecError(ToolkitError):
    """The potential family cannot be handled by the requested method."""


class ContourError(ToolkitError):
    """A branch contour is invalid or too close to a branch point."""


class PathError(ToolkitError):
    """The shooting path is invalid or the integrator could not follow it."""


class SolverError(ToolkitError):
    """An iterative solver did not converge."""

    def __init__(self, message: str, last: Optional[complex] = None, iterations: int = 0):
        super().__init__(message)
        self.last = last
        self.iterations = iterations
