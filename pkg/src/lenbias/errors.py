"""Exception types raised across the toolkit.

Every error that a pipeline stage can surface to a caller derives from
LenbiasError so CLI code can catch one base class and exit nonzero.
"""


class LenbiasError(Exception):
    """Base class for all toolkit errors."""


class ParseError(LenbiasError):
    """A corpus record could not be parsed; message names the line number."""


class LabelArityError(LenbiasError):
    """Corpus does not contain exactly two distinct labels."""


class DuplicateIdError(LenbiasError):
    """Two documents in one corpus share an id."""


class ProfileError(LenbiasError):
    """Length profile cannot be computed (e.g. a class has no documents)."""


class InjectionError(LenbiasError):
    """Threshold alteration emptied a class."""


class SearchError(LenbiasError):
    """Threshold search could not reach the target overlap."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class FilterError(LenbiasError):
    """Overlap-window filtering emptied a class."""


class TrainingError(LenbiasError):
    """Baseline training received degenerate input."""


class CoverageError(LenbiasError):
    """Predictions do not cover the evaluation corpus exactly once."""


class FillError(LenbiasError):
    """A fill backend violated the mask-fill contract."""


class TransportError(LenbiasError):
    """A fill backend was unreachable after retries."""

    def __init__(self, message, attempts=0):
        super().__init__(message)
        self.attempts = attempts
