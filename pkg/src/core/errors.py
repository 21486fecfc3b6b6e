# src/core/errors.py
from typing import Any, Optional, Tuple


class IndexCodingError(Exception):
    """Base class for every error raised by the index coding library."""


class InputFormatError(IndexCodingError, ValueError):
    """Malformed graph, decomposition, code or message input."""

    def __init__(self, message: str, source: Optional[str] = None):
        self.source = source
        if source:
            message = f"{source}: {message}"
        super().__init__(message)


class StructureError(IndexCodingError):
    """A decomposition breaks a structural invariant (shape, sharing, sizes)."""

    def __init__(self, message: str, nodes: Tuple[Any, ...] = ()):
        self.nodes = nodes
        super().__init__(message)


class UnverifiedStructureError(IndexCodingError):
    """An operation needs a verified structure but verification failed."""

    def __init__(self, message: str, report: Any = None):
        self.report = report
        super().__init__(message)


class BudgetExceededError(IndexCodingError):
    """An exact search was refused because it would exceed its budget."""

    def __init__(self, message: str, requested: Optional[int] = None, budget: Optional[int] = None):
        self.requested = requested
        self.budget = budget
        super().__init__(message)


class DecodingError(IndexCodingError):
    """A receiver could not run its decoding plan."""


class InfeasibleProfileError(IndexCodingError, ValueError):
    """A random instance profile cannot be realized."""


class FixtureError(IndexCodingError):
    """A shipped fixture failed its self-check."""
