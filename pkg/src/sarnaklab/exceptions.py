class SarnakLabError(Exception):
    """Base class for errors raised by sarnaklab."""


class ValidationError(SarnakLabError, ValueError):
    """Bad parameters or malformed input."""


class ComputationError(SarnakLabError, ArithmeticError):
    """A quantity is undefined for the given input (e.g. Pinsker beta)."""


class NotCenteredWarning(UserWarning):
    """A +-1 window whose origin marginal is far from (1/2, 1/2)."""
