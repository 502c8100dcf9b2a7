"""Exception hierarchy shared by the library and the command line."""

from __future__ import annotations

from typing import Any, Dict, Optional


class FrameqError(Exception):
    """Base class for all errors raised by :mod:`frameq`."""


class FrameInputError(FrameqError, ValueError):
    """Arguments violate a documented precondition."""


class NotAFrameError(FrameInputError):
    """The synthesis family does not span the ambient space."""


class EnumerationBudgetError(FrameInputError):
    """A lattice enumeration would exceed the configured budget."""


class ContractViolation(FrameqError, RuntimeError):
    """A stated bound failed on concrete data.

    ``details`` carries the worst-case data so callers (and the CLI) can
    report what went wrong without re-running the computation.
    """

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.details: Dict[str, Any] = dict(details or {})


class ConvergenceError(ContractViolation):
    """An iterative representation did not converge."""
