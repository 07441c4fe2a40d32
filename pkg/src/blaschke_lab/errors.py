"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: precondition and domain violations
exit 1, capacity/resolution/search failures exit 2.
"""


class BlaschkeLabError(Exception):
    """Base class for every error raised by the package."""


class DomainError(BlaschkeLabError, ValueError):
    """An argument lies outside the domain where the formula is defined."""


class PreconditionError(BlaschkeLabError, ValueError):
    """A documented precondition of an operation does not hold."""


class DegenerateInputError(PreconditionError):
    """The input is valid but the requested quantity is meaningless for it."""


class NumericalError(BlaschkeLabError, RuntimeError):
    """An iterative solver failed to reach its residual target."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class CapacityError(BlaschkeLabError, RuntimeError):
    """A configured size or order cap was reached before certification."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ResolutionError(BlaschkeLabError, RuntimeError):
    """The sampling grid is too coarse for the requested operation."""


class SearchError(BlaschkeLabError, RuntimeError):
    """A randomized or scanned search found no admissible candidate."""


class InsufficientDataError(PreconditionError):
    """Not enough coefficients or samples were supplied for the request."""
