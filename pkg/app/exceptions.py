"""Domain errors raised by the solvers and the command line."""
from typing import Optional


class CoalitionError(Exception):
    """Base class for every error the toolkit raises on purpose."""

    exit_code: int = 1


# Game data

class GameValidationError(CoalitionError, ValueError):
    """A value table or allocation breaks a TU-game invariant."""


class LengthMismatchError(GameValidationError):
    """Table or vector length does not match the player count."""


class NonzeroEmptyCoalitionError(GameValidationError):
    """v(empty set) must be exactly zero."""


class NonFiniteValueError(GameValidationError):
    """NaN or infinite entry."""


class PartitionError(GameValidationError):
    """Blocks do not form a partition of the player set."""


class OverlapError(PartitionError):
    pass


class IncompleteCoverError(PartitionError):
    pass


class EmptyBlockError(PartitionError):
    pass


class PlayerLimitError(CoalitionError, ValueError):
    """Player count outside the range an operation supports."""


class PlayerSetMismatchError(CoalitionError, ValueError):
    """Two coalition collections do not cover the same players."""


# Linear programming

class LPError(CoalitionError, ValueError):
    """Malformed linear program."""


class DimensionMismatchError(LPError):
    pass


class NonFiniteInputError(LPError):
    pass


# Solution concepts

class NotSimpleGameError(CoalitionError, ValueError):
    """Values are not all in {0, 1} or v(N) != 1."""


class EmptyImputationSetError(CoalitionError, ValueError):
    """Sum of stand-alone values exceeds v(N)."""


class NotAnImputationError(CoalitionError, ValueError):
    pass


class CycleDetectedError(CoalitionError, ValueError):
    """Parent pointers of a relay network contain a cycle."""


class EstateExceedsClaimsError(CoalitionError, ValueError):
    """Bankruptcy estate larger than the total claims."""


# Files and command line

class GameFileError(CoalitionError):
    """A file could not be read into a domain object."""


class ParseError(GameFileError):
    """Malformed file contents.

    Args:
        message: What went wrong
        line: 1-based line of the offending token, when known
        column: 1-based column of the offending token, when known
    """

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class UsageError(CoalitionError):
    """Unknown subcommand or bad flags."""

    exit_code = 2


class FormationLimitError(CoalitionError):
    """Merge-and-split exceeded its step bound."""
