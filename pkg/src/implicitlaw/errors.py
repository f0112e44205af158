"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class ImplicitLawError(Exception):
    """Base class for every error raised by this package."""


class ParseError(ImplicitLawError, ValueError):
    def __init__(self, position: int, message: str):
        self.position = position
        self.message = message
        super().__init__(f"{message} (at position {position})")


class DomainError(ImplicitLawError, ValueError):
    """An argument lies outside the domain of the operation."""


class NumericalError(ImplicitLawError, ArithmeticError):
    """A numerical kernel failed to reach its tolerance."""


class NoBracket(NumericalError):
    pass


class MaxIterations(NumericalError):
    pass


class MaxDepth(NumericalError):
    pass


class EmptyInput(ImplicitLawError, ValueError):
    pass


class HypothesisViolation(ImplicitLawError):
    """The function fails the strict-monotone C1 requirement on its domain."""

    def __init__(self, t_witness: float, message: str):
        self.t_witness = t_witness
        super().__init__(f"{message} (witness t={t_witness!r})")


class NotMonotone(HypothesisViolation):
    pass


class NonFinite(HypothesisViolation):
    pass


class SupportMismatch(ImplicitLawError):
    """The image of the working domain does not carry the source mass."""


class SpecError(ImplicitLawError, ValueError):
    """A problem or distribution spec object is malformed."""
