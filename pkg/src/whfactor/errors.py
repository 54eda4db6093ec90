"""Exception hierarchy.

Two families: :class:`CheckFailure` for mathematical conditions that do not
hold for the given data (the CLI maps these to exit code 2), and
:class:`ComputationError` for numerical breakdowns and bad input (exit code 1).
"""


class WHError(Exception):
    """Base class for all package errors."""


class CheckFailure(WHError):
    """A mathematical hypothesis or certificate failed."""


class ComputationError(WHError):
    """Numerical breakdown or malformed input."""


class DimensionMismatch(ComputationError, ValueError):
    pass


class SingularResolvent(ComputationError):
    """``I - zA`` is numerically singular at the requested point."""

    def __init__(self, message, pole=None):
        super().__init__(message)
        self.pole = pole


class NotDichotomous(CheckFailure):
    pass


class PoleOnCircle(CheckFailure):
    pass


class PoleAtOrigin(CheckFailure):
    pass


class RankDeficiencyTolerance(ComputationError):
    pass


class NotSelfadjoint(CheckFailure):
    pass


class SingularGram(CheckFailure):
    pass


class NormNotStrictlyContractive(CheckFailure):
    pass


class PencilSelectionFailed(ComputationError):
    pass


class CertificationFailed(CheckFailure):
    pass


class SingularIPlusD(CheckFailure):
    pass


class SqrtBranchCut(CheckFailure):
    pass


class MatchingFailed(CheckFailure):
    pass


class SpectralContainmentViolated(CheckFailure):
    pass


class TailTooShort(ComputationError):
    pass


class SingularSection(CheckFailure):
    pass
