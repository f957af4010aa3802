"""Exception types shared across the library.

Every failure mode that a caller can reasonably branch on gets its own
class; all inherit from GridposError so the CLI can map them to exit codes.
"""


class GridposError(Exception):
    """Base class for all library errors."""


class EmptyInput(GridposError):
    pass


class DimensionMismatch(GridposError):
    pass


class ArithmeticOverflow(GridposError):
    """An intermediate integer left the signed 64-bit range."""


class WrongArity(GridposError):
    pass


class DuplicatePoints(GridposError):
    pass


class ArityTooLarge(GridposError):
    pass


class SumMismatch(GridposError):
    pass


class BudgetExceeded(GridposError):
    """An enumeration would exceed the configured budget."""


class OddKInPairMode(GridposError):
    pass


class ZeroEdges(GridposError):
    pass


class TauOutOfRange(GridposError):
    pass


class VacuousConstraint(GridposError):
    pass


class HypothesisViolated(GridposError):
    pass


class NotPrime(GridposError):
    pass


class ProbabilityOutOfRange(GridposError):
    pass


class LengthMismatch(GridposError):
    pass


class NotASolution(GridposError):
    pass


class NonBijectiveSigma(GridposError):
    pass


class FormatError(GridposError):
    """Malformed input file; carries the 1-based line number."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class InvariantViolation(GridposError):
    """A fact that holds by theorem failed at runtime; this is a bug signal."""
