"""Exception types shared across the package."""

from __future__ import annotations


class RhombiError(Exception):
    """Base class for all errors raised by this package."""


class CurveParseError(RhombiError):
    """Input could not be parsed under the declared format."""


class CurveValidationError(RhombiError):
    """Input parsed but does not describe a simple closed polygon."""

    def __init__(self, message: str, crossings: list[tuple[int, int]] | None = None):
        super().__init__(message)
        self.crossings = list(crossings or [])


class InvariantViolation(RhombiError):
    """A geometric property that must hold for simple curves failed numerically.

    Always a bug or a tolerance problem, never a property of the input.
    """


class TwoCornerError(RhombiError):
    """The chosen corner pair cannot be put into the two-corner pose."""
