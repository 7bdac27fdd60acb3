"""Exception hierarchy shared by all agquad modules."""


class AgquadError(Exception):
    """Base class for all errors raised by this package."""


class ContractViolation(AgquadError, ValueError):
    """An input violates a documented precondition (shape, structure, range)."""


class ConvergenceError(AgquadError, RuntimeError):
    """An iterative kernel hit its iteration cap before reaching its target.

    Carries diagnostics so callers can report how close the kernel got.
    """

    def __init__(self, message, iterations=None, best_residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.best_residual = best_residual


class ConstructionError(AgquadError, RuntimeError):
    """Rule or approximation construction failed (degree exhausted, bad measure)."""

    def __init__(self, message, residual_history=None):
        super().__init__(message)
        self.residual_history = residual_history or {}


class SampleFormatError(AgquadError, ValueError):
    """A sample CSV file does not follow the documented grammar."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
