"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Malformed input: bad partition, word, config, or parameter range."""


class CapacityError(RuntimeError):
    """Requested computation exceeds the configured work budget."""


class NumericError(ArithmeticError):
    """Non-finite values encountered where finite numerics are required."""
