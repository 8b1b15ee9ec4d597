"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Malformed arguments: nonpositive jump sizes, bad counts, shape mismatch."""


class DomainError(ValueError):
    """Arguments outside the set where a kernel or density is defined."""


class NumericError(ArithmeticError):
    """Non-finite values reaching a numerical routine."""
