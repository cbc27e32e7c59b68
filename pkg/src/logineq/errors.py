"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid argument: dimension mismatch, parameter outside a theorem window, bad config."""


class ConsistencyError(RuntimeError):
    """Two independent computation routes disagreed beyond their guaranteed tolerance."""


class UnsupportedOperationError(RuntimeError):
    """Operation not available for this group / operator combination."""


class OptimizerError(RuntimeError):
    """Optimizer failed to converge.  Carries the best value found so far."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
