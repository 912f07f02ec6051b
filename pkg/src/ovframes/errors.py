"""Exception types shared across the package."""


class OvfError(Exception):
    """Base class for every error raised by this package."""


class NotInvertibleError(OvfError):
    """An operator failed the invertibility surrogate (relative sigma_min too small)."""

    def __init__(self, message="operator failed the invertibility surrogate", ratio=None):
        super().__init__(message)
        self.ratio = ratio


class RankDeficientError(OvfError):
    """Column space smaller than expected at the working tolerance."""


class ShapeMismatchError(OvfError):
    """Two frames (or operators) with incompatible shapes were combined."""


class InconsistentDecompositionError(OvfError):
    """The two coefficient sums of a representation identity disagree as vectors."""


class PreconditionFailedError(OvfError):
    """A named hypothesis of an operation does not hold on the given input.

    ``reason`` is a short machine-readable tag, e.g. "NotParseval",
    "RangesDiffer", "PNotProjection", "ShiftConditionsFail",
    "AnalysisNotSurjective", "ConditionsFail", "NotOrthogonal".
    """

    def __init__(self, reason, message=None):
        super().__init__(message or reason)
        self.reason = reason


class NotSimilarError(OvfError):
    """No invertible right-multipliers relate the two frames at tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class InvalidSystemError(OvfError):
    """A group-like multiplication table violates the structural axioms."""


class HypothesisFailedError(OvfError):
    """No perturbation-theorem hypothesis path applies to the given data."""


class TheoremViolatedError(OvfError):
    """A proved identity failed numerically; indicates a bug, never expected."""


class FrameFormatError(OvfError):
    """A frame/group/system JSON document is malformed."""
