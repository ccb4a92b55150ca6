"""Exception types shared across the package.

The CLI maps these onto its exit codes: ValidationError -> 2,
ConvergenceError and ConsistencyError -> 3.
"""

__all__ = ["ValidationError", "ConvergenceError", "ConsistencyError"]


class ValidationError(ValueError):
    """Bad input: configuration, path geometry, window, or truncation bounds."""


class ConvergenceError(RuntimeError):
    """A refinement loop hit its cap without meeting its tolerance."""


class ConsistencyError(ArithmeticError):
    """Two independent internal routes to the same quantity disagree."""
