"""
Errors raised by the cutbirth library.

Every error derives from `CutBirthError`, so the command-line frontend can catch
the whole family in one place. Errors signalling a violated precondition also
derive from `ValueError`.
"""
from typing import Optional


class CutBirthError(Exception):
    """Base class for every error raised by cutbirth."""


# series and quadrature


class NonIncreasingEndpoints(CutBirthError, ValueError):
    pass


class InsufficientOrder(CutBirthError, ValueError):
    pass


class EmptyInterval(CutBirthError, ValueError):
    pass


class IntervalCrossesCut(CutBirthError, ValueError):
    pass


# equilibrium solver


class SolverError(CutBirthError):
    """Base class for failures of the endpoint solver."""


class NoConvergence(SolverError):
    pass


class OrderingViolated(SolverError):
    pass


class WrongPhase(SolverError):
    """A converged solution fails `validate_phase`; `location` marks the offending point."""

    def __init__(self, message: str, location: Optional[float] = None):
        super().__init__(message)
        self.location = location


class NegativeDensity(SolverError):
    """
    The solver converged but the density is negative somewhere on a cut.

    Attributes
    ----------
    location : float
        Point of the most negative density value.
    value : float
        The density value found there.
    """

    def __init__(self, location: float, value: float):
        super().__init__(
            f"density {value:.3e} < 0 at x = {location:.6g}; wrong phase for this cut count"
        )
        self.location = location
        self.value = value


class OnSupport(CutBirthError, ValueError):
    pass


class InconsistentFermiLevels(CutBirthError):
    pass


class InvalidPotential(CutBirthError, ValueError):
    pass


# criticality


class NoSecondWell(CutBirthError):
    pass


class NotBracketed(CutBirthError):
    """
    The requested temperature bracket does not enclose a sign change of the gap.

    Attributes
    ----------
    gap_lo, gap_hi : float or None
        Gap values at the bracket ends, None where the one-cut phase was invalid.
    """

    def __init__(
        self, message: str, gap_lo: Optional[float] = None, gap_hi: Optional[float] = None
    ):
        super().__init__(message)
        self.gap_lo = gap_lo
        self.gap_hi = gap_hi


class NotCritical(CutBirthError):
    pass


class EvenOrderZero(CutBirthError):
    pass


class BelowCritical(CutBirthError, ValueError):
    pass


# transition


class InsufficientData(CutBirthError, ValueError):
    pass


class SweepError(CutBirthError):
    """A solve inside a temperature sweep failed; wraps the cause with its temperature."""

    def __init__(self, T: float, cause: Exception):
        super().__init__(f"sweep failed at T = {T:.17g}: {cause}")
        self.T = T
        self.cause = cause


# gas


class Collision(CutBirthError):
    pass


class MismatchedModel(CutBirthError, ValueError):
    pass


# command line


class ParseError(CutBirthError, ValueError):
    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        context = []
        if line is not None:
            context.append(f"line {line}")
        if key is not None:
            context.append(f"key '{key}'")
        prefix = f"[{', '.join(context)}] " if context else ""
        super().__init__(prefix + message)
        self.key = key
        self.line = line


class ValidationError(CutBirthError, ValueError):
    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(f"[key '{key}'] {message}" if key else message)
        self.key = key


class IoError(CutBirthError, OSError):
    pass
