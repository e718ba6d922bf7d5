"""Exception types shared across the package."""


class ProfileError(ValueError):
    """A medium specification violates a validity constraint."""


class IntegrationError(RuntimeError):
    """The ODE integrator could not meet its error tolerance."""

    def __init__(self, message: str, worst_error: float | None = None):
        super().__init__(message)
        self.worst_error = worst_error


class DomainError(ValueError):
    """An argument lies outside the operation's admissible domain."""


class RootFindError(RuntimeError):
    """Zero counting or refinement failed; carries the best diagnostic."""

    def __init__(self, message: str, best: complex | None = None):
        super().__init__(message)
        self.best = best


class CaseError(ValueError):
    """An asymptotic-law hypothesis is violated for the given profile."""
