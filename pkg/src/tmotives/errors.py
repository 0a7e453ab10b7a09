"""Exception taxonomy shared by all subsystems.

Error classes map onto the CLI exit codes: ValidationError -> 2,
CapExhausted -> 3, anything else unexpected -> 4.
"""


class TMotivesError(Exception):
    """Base class for all package errors."""


class ValidationError(TMotivesError):
    """Input violates a documented precondition."""


class CharacteristicViolation(ValidationError):
    """det(delta) has support outside the characteristic point (t - theta)."""


class NotTorsion(ValidationError):
    """A presentation contains a zero elementary divisor (free part)."""


class NotRestricted(ValidationError):
    """tau-linearisation is not bijective (determinant not a unit)."""


class DegenerateInseparable(ValidationError):
    """Additive equation with phi = 0; the unique q^d-th root path applies."""


class CapExhausted(TMotivesError):
    """An escalation loop (tower level or degree cap) hit its configured bound."""

    def __init__(self, message, cap=None):
        super().__init__(message)
        self.cap = cap
