"""Exception hierarchy for ppbound.

Every error carries the process exit code the CLI uses when it surfaces.
"""

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_SIZE_GUARD = 3
EXIT_INTERNAL = 4


class PPBoundError(Exception):
    """Base class for all ppbound errors."""

    exit_code = EXIT_INTERNAL


class ArgumentError(PPBoundError, ValueError):
    """An argument is outside the domain of an operation."""

    exit_code = EXIT_USAGE


class PolynomialParseError(PPBoundError, ValueError):
    """A polynomial string does not match the input grammar."""

    exit_code = EXIT_PARSE

    def __init__(self, message: str, text: str = "", position: int | None = None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)

    def pointer(self) -> str:
        """Return the offending text with a caret under the error position."""
        if self.position is None:
            return self.text
        return f"{self.text}\n{' ' * self.position}^"


class DegreeError(PolynomialParseError):
    """The parsed polynomial has degree below 2."""


class SizeGuardError(PPBoundError):
    """A computation would exceed a configured size limit."""

    exit_code = EXIT_SIZE_GUARD


class InternalAssertionError(PPBoundError, AssertionError):
    """An internal invariant failed; indicates a bug, not bad input."""

    exit_code = EXIT_INTERNAL
