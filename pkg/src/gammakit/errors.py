"""Exception types shared by all modules."""


class GammaError(Exception):
    """Base class for toolkit errors."""


class StructuralError(GammaError, ValueError):
    """Malformed input: wrong shapes, mismatched dimensions, non-finite data."""


class DomainError(GammaError, ValueError):
    """Well-formed input outside an operation's precondition."""
