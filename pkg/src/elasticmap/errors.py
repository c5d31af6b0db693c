"""Exception types shared across the package."""


class FormatError(ValueError):
    """Raised when a demonstration file cannot be parsed."""


class SizeError(ValueError):
    """Raised when an input has too few points/nodes for an operation."""


class DimensionError(ValueError):
    """Raised when inputs disagree on spatial dimensionality or shape."""


class DegenerateSystemError(RuntimeError):
    """Raised when the constrained quadratic system is singular or produced
    a non-finite solution."""
