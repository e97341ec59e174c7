"""Shared exception types."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SizeError(ValueError):
    """A size parameter is outside the supported range."""


class ValidationError(ValueError):
    """A structured value violates one of its defining constraints."""


class EstimationError(RuntimeError):
    """A numerical estimate could not reach its accuracy target."""
