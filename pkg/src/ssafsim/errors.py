"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Raised when arguments violate a documented precondition."""


class NumericDomainError(ArithmeticError):
    """Raised when a numeric input is outside the mathematical domain
    of an operation (e.g. a noise covariance that is not positive
    definite)."""


class EstimationError(RuntimeError):
    """Raised when an estimator has too little usable data."""
