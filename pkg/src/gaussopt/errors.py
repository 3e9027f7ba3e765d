"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class DegenerateDataError(ValueError):
    """Fit data cannot identify every model coefficient."""


class OutOfDomainError(ArithmeticError):
    """A closed-form prediction falls outside the model's valid domain."""


class ModelFileError(Exception):
    """A model file is missing, unreadable, or malformed."""
