"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the domain of the requested operation."""


class ConvergenceError(RuntimeError):
    """A numerical procedure could not reach the requested tolerance."""
