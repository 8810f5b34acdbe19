"""Exception hierarchy shared across the package."""


class DistclosureError(Exception):
    """Base class for all package errors."""


class DomainError(DistclosureError, ValueError):
    """Operator input outside its admissible domain."""


class ValidationError(DistclosureError, ValueError):
    """A graph or matrix violates a structural invariant."""


class ParseError(DistclosureError, ValueError):
    """Malformed input file. Carries a line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericError(DistclosureError, ArithmeticError):
    """A numerical routine failed to meet its tolerance."""


class NoRootError(NumericError):
    """Root bracketing or refinement failed."""
