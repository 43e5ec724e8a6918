"""Exception types shared across the package."""


class OstrowskiError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(OstrowskiError, ValueError):
    """A function was evaluated outside the set where it is defined.

    ``node`` carries the offending sub-expression when the failure comes from
    an expression tree, ``point`` the abscissa when it is known.
    """

    def __init__(self, message, node=None, point=None):
        super().__init__(message)
        self.node = node
        self.point = point


class IntegrationError(OstrowskiError, RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


class InfeasibleBoundError(OstrowskiError, ValueError):
    """Every branch of a bound needs derivative values outside the domain."""
