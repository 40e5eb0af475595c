"""Exception types shared across the toolkit."""


class PapcError(Exception):
    """Base class for all errors raised by this package."""


class ComplementOfTau(PapcError):
    """The internal action tau has no complement."""


class ParseError(PapcError):
    """Malformed concrete syntax, with source position."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{line}:{column}: {message}" if line else message)
        self.line = line
        self.column = column


class TauInPrefix(ParseError):
    """tau used as a prefix action; prefixes range over named actions only."""


class DuplicateDefinition(PapcError):
    """The same constant is bound twice in one definitions file."""


class IdentifierCollision(PapcError):
    """An identifier renaming would merge two distinct running actions."""


class UnboundConstant(PapcError):
    """A constant with no defining equation was looked up."""


class UnguardedRecursion(PapcError):
    """A constant unfolded back to itself without passing a prefix."""


class CapExceeded(PapcError):
    """An enumeration bound was hit; raising it is preferred to sampling."""


class IllFormedPlacement(PapcError):
    """A term with running prefixes was placed where only plain processes fit."""


class NoRoot(PapcError):
    """A model file defines no `system` entry and no root was supplied."""


class UsageError(PapcError):
    """Bad command-line invocation."""
