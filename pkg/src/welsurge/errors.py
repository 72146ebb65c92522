"""Exception types shared across the package.

Each class pins the process exit status the command-line driver maps it
to, so the error-to-status table lives in one place.
"""
from __future__ import annotations


class WelsurgeError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 4


class LatticeMismatch(WelsurgeError):
    """Operands belong to different lattices, or a coefficient vector has the wrong arity."""


class ParseError(WelsurgeError):
    """Malformed textual input (class literal, model file, table file, argv)."""

    exit_code = 3

    def __init__(self, message: str, *, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}, column {column})" if column is not None else f" (line {line})"
        elif column is not None:
            where = f" (column {column})"
        super().__init__(message + where)


class UnknownComponent(WelsurgeError):
    """A named real component does not exist in the surface model."""


class NegativeK(WelsurgeError):
    """The lower index of a binomial coefficient must be non-negative."""


class PreconditionFailed(WelsurgeError):
    """A relation was invoked outside its domain; the message names the failing clause."""


class MissingEntry(WelsurgeError):
    """Strict evaluation hit a table key that has no entry."""

    exit_code = 2


class OddPairing(WelsurgeError):
    """d.E must be even (and non-negative) for the correspondence and its inverse."""


class ExcludedClass(WelsurgeError):
    """The class is a forbidden multiple of a ruling or exceptional class."""


class TangencyMismatch(WelsurgeError):
    """Tangency orders do not add up to the intersection number with the divisor."""


class Unbounded(WelsurgeError):
    """The genus constraint never fails, so the relation sum has no finite truncation."""


class DuplicateKey(WelsurgeError):
    """Two records of one table assign different values to the same key."""

    exit_code = 3


class ConflictingValue(WelsurgeError):
    """Tables being merged assign different values to the same key."""

    exit_code = 3
