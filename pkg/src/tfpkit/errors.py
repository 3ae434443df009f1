"""Exception hierarchy.

Data problems (bad input, domain violations) derive from ``ValidationError``;
failures of the numerical machinery derive from ``NumericError``.  The CLI maps
the two families to exit codes 2 and 3.
"""

from __future__ import annotations


class TfpkitError(Exception):
    """Base class for all errors raised by tfpkit."""


class ValidationError(TfpkitError, ValueError):
    """Input data or parameters violate a precondition."""


class DomainError(ValidationError):
    """A value lies outside the mathematical domain (e.g. log of a nonpositive number)."""


class InsufficientDataError(ValidationError):
    """Too few observations for the requested estimator."""


class NumericError(TfpkitError, ArithmeticError):
    """Numerical failure during estimation or testing."""


class SingularDesignError(NumericError):
    """Regressor matrix is rank deficient."""


class UndefinedStatisticError(NumericError):
    """A statistic has no finite value for the given input (e.g. zero variance)."""


class ExplosiveDisturbanceError(NumericError):
    """Estimated AR(1) coefficient left the stationary region |rho| < 1."""


class ConvergenceError(NumericError):
    """Iterative estimation did not converge.

    The last iterate is kept on ``last`` so callers can inspect it.
    """

    def __init__(self, message: str, last=None):
        super().__init__(message)
        self.last = last
