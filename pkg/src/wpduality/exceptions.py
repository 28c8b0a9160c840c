"""
Custom exceptions for wpduality.

Every error raised by the library derives from DualityError, and each one
also derives from the closest builtin so callers can catch either.
"""

__all__ = [
    "DualityError",
    "DimensionMismatchError",
    "HermiticityError",
    "EigenConvergenceError",
    "InvalidStateError",
    "InvalidProfileError",
    "InvalidCutError",
    "ChannelError",
    "UnknownStateError",
    "UnknownRelationError",
    "InapplicableRelationError",
    "ConfigError",
    "NumericalInconsistencyError",
    "SerializationError",
]


class DualityError(Exception):
    """Base exception for all wpduality errors."""


class DimensionMismatchError(DualityError, ValueError):
    """Raised when operand dimensions are incompatible."""

    def __init__(self, expected, got, what: str = "dimension"):
        self.expected = expected
        self.got = got
        super().__init__(f"{what} mismatch: expected {expected}, got {got}")


class HermiticityError(DualityError, ValueError):
    """Raised when a matrix is not Hermitian within tolerance."""

    def __init__(self, deviation: float, tol: float):
        self.deviation = deviation
        self.tol = tol
        super().__init__(
            f"Matrix is not Hermitian: max |A - A^H| = {deviation:.3e} exceeds tolerance {tol:.1e}"
        )


class EigenConvergenceError(DualityError, ArithmeticError):
    """Raised when the Hermitian eigensolver fails to converge."""


class InvalidStateError(DualityError, ValueError):
    """Raised when an operator or vector is not a valid quantum state."""


class InvalidProfileError(DualityError, ValueError):
    """Raised for malformed dimension profiles or profile specs like '2x3'."""


class InvalidCutError(DualityError, ValueError):
    """Raised for cuts that do not split a profile into two nonempty groups."""


class ChannelError(DualityError, ValueError):
    """Raised for Kraus sets that are not trace preserving or are misshaped."""


class UnknownStateError(DualityError, KeyError):
    """Raised when a named state is not in the registry."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Unknown state '{name}'")

    def __str__(self) -> str:
        return self.args[0]


class UnknownRelationError(DualityError, KeyError):
    """Raised when a relation id is not registered."""

    def __init__(self, relation_id: str):
        self.relation_id = relation_id
        super().__init__(f"Unknown relation id '{relation_id}'")

    def __str__(self) -> str:
        return self.args[0]


class InapplicableRelationError(DualityError, ValueError):
    """Raised when a relation is evaluated on a context it does not apply to."""

    def __init__(self, relation_id: str, reason: str):
        self.relation_id = relation_id
        self.reason = reason
        super().__init__(f"Relation {relation_id} is not applicable: {reason}")


class ConfigError(DualityError, ValueError):
    """Raised for invalid run configuration."""


class SerializationError(DualityError, ValueError):
    """Raised for malformed serialized state records."""


class NumericalInconsistencyError(DualityError, ArithmeticError):
    """Raised when two routes to the same quantity disagree beyond tolerance."""
