"""Exception hierarchy for number field computations."""

from typing import Optional


class NumberFieldError(Exception):
    """Base class for every error raised by the toolkit."""

    #: Exit code used by the command line driver.
    exit_code = 1


class MathematicalNegative(NumberFieldError):
    """A verified mathematical negative rather than a failure to certify."""

    exit_code = 2


class PreconditionError(NumberFieldError):
    """An operation was called outside of its hypotheses."""


# field_core
class NotMonic(NumberFieldError):
    pass


class ReducibleOrUndecided(NumberFieldError):
    pass


class BasisNotARing(NumberFieldError):
    pass


class BasisNotIntegral(NumberFieldError):
    pass


class BasisRequired(NumberFieldError):
    """Z[theta] could not be certified maximal and no basis was supplied."""


class NotSquarefree(NumberFieldError):
    pass


class DiscriminantsNotCoprime(NumberFieldError):
    pass


class FNotTotallyReal(NumberFieldError):
    pass


class DivisionByZero(NumberFieldError, ZeroDivisionError):
    pass


class FieldMismatch(NumberFieldError):
    pass


class ZeroElement(NumberFieldError):
    pass


# embeddings / geometry
class PrecisionExhausted(NumberFieldError):
    pass


class Undecided(Exception):
    """Internal signal: an interval comparison needs more precision."""


class NotFound(MathematicalNegative):
    pass


class InternalInconsistency(NumberFieldError):
    pass


# structure
class HypothesisViolated(NumberFieldError):
    pass


class RecognitionFailed(MathematicalNegative):
    pass


class NotTotallyComplex(PreconditionError):
    pass


# search
class MuTotallyReal(PreconditionError):
    pass


class NoRealPlace(PreconditionError):
    pass


class TorsionTrivial(MathematicalNegative):
    pass


class NotFoundBelow(MathematicalNegative):
    def __init__(self, bound, message: Optional[str] = None):
        self.bound = bound
        super().__init__(message or f"No integral generator with height <= {bound}")


class BudgetExceeded(NumberFieldError):
    pass


# cli_corpus
class ParseError(NumberFieldError):
    exit_code = 64

    def __init__(self, message: str, position: int = 0):
        self.position = position
        super().__init__(f"{message} (at position {position})")


class DimensionMismatch(NumberFieldError):
    exit_code = 64


class UnknownCorpusName(NumberFieldError):
    exit_code = 64


class UsageError(NumberFieldError):
    """Malformed command line."""

    exit_code = 64
