"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class ToleranceError(RuntimeError):
    """A numerical check did not meet its tolerance."""
