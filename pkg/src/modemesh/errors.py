"""Exception types shared across the package.

The taxonomy mirrors the three failure families callers care about:
malformed input data (:class:`FormatError`), semantically invalid input
(:class:`DimensionError`, :class:`UnitarityError`, :class:`SymmetryError`,
:class:`ValidationError`, :class:`InsufficientDataError`) and broken
internal invariants (:class:`ConsistencyError`).
"""

from __future__ import annotations


class ModemeshError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(ModemeshError):
    """An input has a shape, size, or index incompatible with the operation."""


class UnitarityError(ModemeshError):
    """A matrix expected to be unitary is not, within tolerance."""

    def __init__(self, message: str, deviation: float | None = None):
        if deviation is not None:
            message = f"{message} (max deviation {deviation:.3e})"
        super().__init__(message)
        self.deviation = deviation


class SymmetryError(ModemeshError):
    """A matrix fails a required symmetry, e.g. Hermiticity."""

    def __init__(self, message: str, deviation: float | None = None):
        if deviation is not None:
            message = f"{message} (max deviation {deviation:.3e})"
        super().__init__(message)
        self.deviation = deviation


class FormatError(ModemeshError):
    """An input file or stream could not be parsed."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{message} ({where})"
        super().__init__(message)
        self.line = line
        self.column = column


class ValidationError(ModemeshError):
    """Semantic validation failed, e.g. a mapping is not a bijection."""


class ConsistencyError(ModemeshError):
    """An internal invariant was violated; indicates a bug or corrupt input."""


class InsufficientDataError(ModemeshError):
    """Too few usable data points to perform the requested fit."""
