"""Exception hierarchy shared by all frobsurf modules."""


class FrobsurfError(Exception):
    """Base class for every error raised by this package."""


# --- field construction and arithmetic ---

class NotPrime(FrobsurfError):
    pass


class DegreeTooLarge(FrobsurfError):
    pass


class FieldMismatch(FrobsurfError):
    pass


class DivisionByZero(FrobsurfError, ZeroDivisionError):
    pass


class NotAnExtension(FrobsurfError):
    pass


class NoCompatibleRoot(FrobsurfError):
    """A source modulus has no root in a declared extension: signals a modulus bug."""


# --- polynomial parsing and arithmetic ---

class PolySyntaxError(FrobsurfError):
    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class NotHomogeneous(FrobsurfError):
    pass


class UnknownVariable(PolySyntaxError):
    pass


class BadFieldLiteral(PolySyntaxError):
    pass


class ZeroDivisor(FrobsurfError):
    pass


# --- geometry ---

class BudgetExceeded(FrobsurfError):
    pass


class PointNotOnVariety(FrobsurfError):
    pass


class SingularPoint(FrobsurfError):
    pass


class DimensionMismatch(FrobsurfError):
    pass


# --- local charts and series ---

class NoTransverseCoordinate(FrobsurfError):
    pass


class TruncationTooSmall(FrobsurfError):
    pass


class RankDeficient(FrobsurfError):
    pass


class ChartInconsistent(FrobsurfError):
    """A defining polynomial does not vanish on a solved chart: inconsistent input system."""


# --- order sequences ---

class DegenerateCurve(FrobsurfError):
    pass


class NoSmoothPointFound(FrobsurfError):
    pass


class AllCandidatesVanish(FrobsurfError):
    """Every candidate twisted Wronskian vanished to truncation: sampling or truncation failure."""


class InconsistentProfile(FrobsurfError):
    pass


class TooFewPoints(FrobsurfError):
    pass


# --- surface analysis ---

class FrobeniusNonClassical(FrobsurfError):
    pass


class IrreducibilityNotAsserted(FrobsurfError):
    pass


class HypothesisNotMet(FrobsurfError):
    def __init__(self, which, detail=""):
        msg = f"hypothesis not met: {which}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.which = which


# --- bounds ---

class BadDegree(FrobsurfError):
    pass


class NonIntegerResult(FrobsurfError):
    """A genus-bound formula produced a non-integer: signals a transcription bug."""


# --- job files ---

class JobFileError(FrobsurfError):
    def __init__(self, message, line, column=None):
        loc = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{message} ({loc})")
        self.line = line
        self.column = column
