"""Exception types shared across the package."""


class KrulldimError(Exception):
    """Base class for all errors raised by this package."""


class ConstraintError(KrulldimError):
    """A constructor argument or operation input violates a named invariant."""


class ParseError(KrulldimError):
    """Malformed expression text."""

    def __init__(self, message, position, expected=None):
        detail = f"syntax error at {position}: {message}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)
        self.position = position
        self.expected = expected


class ApplicabilityError(KrulldimError):
    """No formula whose hypotheses are satisfied covers the request."""


class InexactPairError(KrulldimError):
    """A formula needs quotient heights the model cannot certify."""


class ConsistencyError(KrulldimError):
    """Two evaluations that must agree returned different values."""
