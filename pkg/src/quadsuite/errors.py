"""Exception types shared across the package.

The command line front end maps these onto distinct exit codes, so
library code should raise the most specific type that applies.
"""


class QuadsuiteError(Exception):
    """Base class for all package-specific errors."""


class StateValidationError(QuadsuiteError, ValueError):
    """A density matrix failed the Hermiticity / trace / positivity checks."""


class DomainError(QuadsuiteError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class CoverageError(QuadsuiteError, RuntimeError):
    """A sampled grid does not cover the support of the integrand."""


class ConvergenceError(QuadsuiteError, RuntimeError):
    """An iterative evaluation failed to converge within its budget."""


class ConditioningError(QuadsuiteError, RuntimeError):
    """A linear solve was abandoned because the system is ill conditioned."""
