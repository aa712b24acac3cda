class DomainError(ValueError):
    """A label or vertex outside the instance's declared sets."""


class ConfigurationError(ValueError):
    """An operation needs data the instance does not carry (e.g. label costs)."""


class InfeasibleProfile(ValueError):
    pass


class PreconditionError(ValueError):
    pass


class MergeError(ValueError):
    pass


class PipelineError(RuntimeError):
    pass


class CapExceeded(RuntimeError):
    """Raised instead of truncating an exhaustive search."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: search space {size} exceeds cap {cap}")
        self.size = size
        self.cap = cap


class ExpanderError(RuntimeError):
    """No seeded attempt produced a passing spectral certificate."""

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best
