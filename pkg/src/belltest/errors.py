"""Exception types shared across the package.

Each class carries the CLI exit code it maps to.
"""


class BellTestError(Exception):
    exit_code = 1


class ParseError(BellTestError, ValueError):
    exit_code = 2


class ValidationError(BellTestError, ValueError):
    exit_code = 3


class ConsistencyError(BellTestError, ArithmeticError):
    """A derived quantity left its mathematically guaranteed range."""

    exit_code = 4


class DegeneratePredictionError(ValidationError):
    """A predicted cell is zero, so an observed/predicted ratio is undefined."""
