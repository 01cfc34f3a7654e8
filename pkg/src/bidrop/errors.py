"""Exception hierarchy shared by all bidrop modules.

The CLI maps these onto exit codes: invalid input (DomainError,
ValidationError) exits with 2, failed numerics (NumericalError,
ModelError) with 1.
"""


class BidropError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(BidropError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ValidationError(BidropError, ValueError):
    """Inputs are individually sane but mutually inconsistent."""


class NumericalError(BidropError, RuntimeError):
    """An iteration or quadrature failed to reach its tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ModelError(BidropError, RuntimeError):
    """No solution of the requested kind exists for these parameters."""
