"""Exception hierarchy."""

from __future__ import annotations


class WeakCorrError(Exception):
    """Base class for all errors raised by this package."""


class NotHermitian(WeakCorrError, ValueError):
    pass


class NoConvergence(WeakCorrError, RuntimeError):
    pass


class DimensionMismatch(WeakCorrError, ValueError):
    pass


class UnknownLabel(WeakCorrError, KeyError):
    def __str__(self) -> str:
        # KeyError quotes its argument; keep the message readable
        return str(self.args[0]) if self.args else ""


class PostselectionTooRare(WeakCorrError, ArithmeticError):
    """The post-selection probability is at or below the cutoff.

    The weak value (and the conditional quasi-probability) is a ratio whose
    denominator vanishes there, so it is reported as undefined rather than
    returned as ``inf``/``nan``.
    """

    def __init__(self, label: float, probability: float, cutoff: float) -> None:
        self.label = label
        self.probability = probability
        self.cutoff = cutoff
        super().__init__(
            f"post-selection on b={label!r} has probability {probability:.3e} "
            f"<= cutoff {cutoff:.1e}; weak value undefined"
        )


class ParseError(WeakCorrError, ValueError):
    pass


class ValidationError(WeakCorrError, ValueError):
    """A scenario field failed validation; ``field`` names the offender."""

    def __init__(self, field: str, message: str) -> None:
        self.field = field
        super().__init__(f"{field}: {message}")


class IdentityViolation(WeakCorrError, AssertionError):
    """Two routes to the same quantity disagreed beyond tolerance."""
