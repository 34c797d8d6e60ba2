"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class NonInvertibleError(DomainError):
    """A truncated series with zero constant term cannot be inverted."""


class NoClosedFormError(DomainError):
    """No polynomial closed form exists for this drift; use the exact oracle.

    Carries the approximate boundaries (lo, hi) of the drift window in which
    only the oracle applies at this horizon.
    """

    def __init__(self, message: str, window: tuple[float, float]):
        super().__init__(message)
        self.window = window


class RootSearchError(RuntimeError):
    """A root scan exhausted its budget.  ``found`` holds any partial results."""

    def __init__(self, message: str, found: list | None = None):
        super().__init__(message)
        self.found = found if found is not None else []
