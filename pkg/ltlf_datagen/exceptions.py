"""
Exception hierarchy for ltlf-datagen.

Input problems also derive from ValueError so callers that only know the
standard library can still catch them.
"""

from typing import Optional


class LtlfDatagenError(Exception):
    """Base class for every error raised by this package."""


class SpecError(LtlfDatagenError, ValueError):
    """A task specification is malformed or references something undeclared."""


class ConfigError(LtlfDatagenError, ValueError):
    """An LTLF_DATAGEN_* environment setting is malformed."""


class PositionedSyntaxError(LtlfDatagenError, ValueError):
    """A text could not be parsed; `position` is the 0-based character offset."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        where = "end of input" if position >= len(text) else f"position {position}"
        super().__init__(f"{message} at {where}")


class FormulaSyntaxError(PositionedSyntaxError):
    """An LTLf formula is not well formed."""


class UnknownAtomError(LtlfDatagenError, ValueError):
    """A formula mentions an atom that is not a declared constraint."""

    def __init__(self, atom: str):
        self.atom = atom
        super().__init__(f"unknown atom {atom}")


class ConstraintSyntaxError(PositionedSyntaxError):
    """A constraint expression is not well formed."""


class DomainViolationError(LtlfDatagenError, ValueError):
    """An assignment is missing a variable or holds a value outside its domain."""


class CompileError(LtlfDatagenError):
    """Automaton compilation failed."""


class StateLimitExceeded(CompileError):
    """Compilation produced more states than the configured cap."""


class SolverCapExceeded(LtlfDatagenError):
    """A constraint problem exceeds the enumeration cap."""


class EmptyPoolError(LtlfDatagenError):
    """Sampling was requested from a guard with no solutions."""


class CombinatorialCapExceeded(LtlfDatagenError):
    """An exhaustive check would enumerate more traces than allowed."""


class InfeasibleError(LtlfDatagenError):
    """No walk over the automaton achieves the requested label and length."""

    def __init__(self, message: str, target: Optional[bool] = None,
                 length_range: Optional[tuple] = None):
        self.target = target
        self.length_range = length_range
        super().__init__(message)


class BindingError(LtlfDatagenError):
    """A symbolic label has no image to bind to."""


class DatasetFormatError(LtlfDatagenError):
    """An emitted dataset directory is unreadable or garbled."""
