"""Exception hierarchy shared by every module."""

from __future__ import annotations


class CopaceticError(Exception):
    """Base class for all library errors."""


class UnknownIdentifier(CopaceticError, LookupError):
    pass


class StructureError(CopaceticError, ValueError):
    """A builder rejected its input (cycle, multi-edge, missing rho entry...)."""

    def __init__(self, message: str, axiom: str | None = None):
        super().__init__(message)
        self.axiom = axiom


class PreconditionError(CopaceticError, ValueError):
    pass


class CapacityError(PreconditionError):
    pass


class HypothesisFailure(PreconditionError):
    """A construction's mathematical hypothesis does not hold on the input."""

    def __init__(self, message: str, step: str | None = None, witness=None):
        super().__init__(message)
        self.step = step
        self.witness = witness


class InvariantBreach(CopaceticError, RuntimeError):
    """An internal invariant failed mid-computation.

    Raised only when the inputs satisfied every precondition, so it always
    indicates a bug rather than bad input.
    """


class ParseError(CopaceticError, ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno
