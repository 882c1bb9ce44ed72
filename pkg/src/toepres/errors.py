"""Exception types shared across the library.

The CLI maps MathDomainError subclasses to exit status 1 (the request is
mathematically infeasible for the given data) and input or parse failures
to exit status 2.
"""


class MathDomainError(Exception):
    """Base class for mathematically infeasible requests."""


class PoleError(MathDomainError):
    """Evaluation at z = 0, the pole of the principal part."""


class NotARootError(MathDomainError):
    """The claimed root fails the residual certificate."""


class RootSolverError(MathDomainError):
    """Root iteration failed to certify; best residuals attached."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class ContinuationError(MathDomainError):
    """Nearest-neighbor root matching was ambiguous; the caller must reduce
    the continuation step."""


class ExceptionalPointError(MathDomainError):
    """The point lies in, or numerically too close to, the critical-value
    set K where the divisor has multiple roots."""


class SpectrumMembershipError(MathDomainError):
    """w is not in the resolvent set, so the requested object is undefined."""


class NotOnCurveError(MathDomainError):
    """No unimodular divisor points at w0, so there is no non-tangential
    domain to build."""


class PartialFractionError(MathDomainError):
    """Interior roots are too close together for stable partial fractions."""


class InsufficientDataError(MathDomainError):
    """Too few usable scan records to fit slopes."""


class SymbolFormatError(ValueError):
    """Symbol JSON violates the schema or the coefficient invariants."""
