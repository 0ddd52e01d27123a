"""Exception types raised by the package."""


class ConfigError(ValueError):
    """Invalid user input: bad arguments, malformed files or config keys."""


class NumericalError(ArithmeticError):
    """A factorization or eigensolve failed (e.g. a matrix is not positive definite)."""
