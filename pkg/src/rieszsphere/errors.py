"""Exception hierarchy."""


class RieszError(Exception):
    """Base class for all package errors."""


class DomainError(RieszError, ValueError):
    """An argument lies outside the documented domain."""


class PoleAtC(DomainError):
    """The hypergeometric series hits a pole of its lower parameter."""


class NoConvergence(RieszError, ArithmeticError):
    """A series or iteration did not converge."""


class SolverFailure(RieszError, RuntimeError):
    """A bracketing root solver could not find a sign change.

    ``table`` holds the scanned ``(x, f(x))`` pairs for diagnosis.
    """

    def __init__(self, message, table=None):
        super().__init__(message)
        self.table = list(table or [])


class KindMismatch(DomainError):
    """A Gonchar function kind does not match the charge sign / side."""


class NoSignChange(DomainError):
    """No sign change of the polynomial on the requested interval."""


class IdentityViolation(RieszError, AssertionError):
    """An exact polynomial identity failed at some sample point."""


class InclusionViolation(RieszError, AssertionError):
    """A trinomial zero-inclusion sector does not hold exactly one zero."""


class AssertionFailure(RieszError, AssertionError):
    """A qualitative property of the potential failed on a grid."""


class NoSolution(RieszError):
    """Marker raised internally when a relation has no admissible solution."""
