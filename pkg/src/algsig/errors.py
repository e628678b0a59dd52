"""Exception taxonomy shared by all algsig modules.

The CLI maps these onto distinct exit codes; library users can catch the
common base class.
"""


class AlgsigError(Exception):
    """Base class for every error raised by this package."""


class DomainError(AlgsigError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PreconditionError(AlgsigError, ValueError):
    """A documented hypothesis of an operation is violated."""


class CapacityError(AlgsigError, OverflowError):
    """A requested computation exceeds representable or practical size."""


class ConvergenceError(AlgsigError, ArithmeticError):
    """An iterative scheme failed to reach its tolerance within its cap."""


class CapabilityError(AlgsigError, ValueError):
    """A function object lacks data (derivatives, norms) the caller needs."""


class AccuracyError(AlgsigError, ArithmeticError):
    """A numerical result failed its internal accuracy monitor."""

    def __init__(self, message: str, *, diagnostic=None):
        super().__init__(message)
        self.diagnostic = diagnostic


class ConsistencyError(AlgsigError, RuntimeError):
    """An internal invariant failed; indicates a bug, not bad input."""
