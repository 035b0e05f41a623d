"""Exception hierarchy shared by every canarrow subpackage."""

from typing import Any


class CanarrowError(Exception):
    """Base class of all errors raised by canarrow."""


class SignatureError(CanarrowError, ValueError):
    """Malformed sort hierarchy, operator declaration or statement."""


class ParseError(CanarrowError, ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"line {line}, column {col}: {message}"
        super().__init__(message)


class SortError(CanarrowError, TypeError):
    """A binding or construction that violates the sort discipline."""


class UnsupportedConditionError(CanarrowError, ValueError):
    """A conditional rule whose condition is not a Boolean equality with true."""


class UnsupportedFragmentError(CanarrowError, ValueError):
    """An axiom combination outside what the unifiers decide."""


class StructuralError(CanarrowError, ValueError):
    """A term that breaks an assumed shape, e.g. a malformed guard."""


class OptionError(CanarrowError, ValueError):
    """An invalid combination of search or command line options."""


class SmtBackendError(CanarrowError, RuntimeError):
    """The constraint backend failed or returned an undecided verdict under a strict policy."""


class ResourceLimitError(CanarrowError, RuntimeError):
    """A configured resource cap was exceeded.

    ``partial`` carries whatever was produced before the cap was hit.
    """

    def __init__(self, message: str, partial: Any = None):
        super().__init__(message)
        self.partial = partial


class UnificationLimitError(ResourceLimitError):
    pass


class NonTerminationError(ResourceLimitError):
    pass


class StateLimitError(ResourceLimitError):
    pass


class SearchTimeoutError(ResourceLimitError):
    """The wall-clock budget of a search ran out."""
