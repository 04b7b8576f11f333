"""Exceptions shared across the package."""


class SingularConfiguration(Exception):
    """Raised when the drag balance matrix loses rank (collinear links)."""

    def __init__(self, message, shape=None, time=None, condition=None):
        super().__init__(message)
        self.shape = shape
        self.time = time
        self.condition = condition


class NonFiniteState(Exception):
    """Raised when an integration state or twist becomes NaN/Inf."""
