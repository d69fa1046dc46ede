"""Exception types raised across the package."""

from __future__ import annotations


class PropusError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PropusError, ValueError):
    """An argument lies outside the domain an operation supports."""


class UnsupportedGroupError(PropusError):
    """The operation needs a cyclic group but got a product of cyclic groups."""


class InvalidSubgroupError(PropusError, ValueError):
    """A claimed multiplicative subgroup is not closed or contains non-units."""


class MixedGroupError(PropusError, ValueError):
    pass


class UnknownOrbitError(PropusError, KeyError):
    pass


class InfeasibleTaskError(PropusError, ValueError):
    """Requested block sizes cannot be tiled by the available orbits."""


class ConjectureViolation(PropusError):
    pass


class ChecksumError(PropusError):
    pass


class ParseError(PropusError, ValueError):
    """Malformed family file. Carries a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int = 1) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column
