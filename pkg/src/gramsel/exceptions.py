"""Exception types raised by gramsel."""


class GramselError(Exception):
    """Base class for every error raised by this package."""


class UnstableSystemError(GramselError, ValueError):
    """The dynamics matrix is not Hurwitz stable.

    Carries the computed spectral abscissa in ``abscissa``.
    """

    def __init__(self, message, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa


class EigenDecompositionError(GramselError, RuntimeError):
    """An eigenvalue iteration failed to converge."""


class NotPositiveDefiniteError(GramselError, ValueError):
    """A symmetric matrix required to be positive definite is not.

    ``min_eigenvalue`` holds the offending smallest eigenvalue when known.
    """

    def __init__(self, message, min_eigenvalue=None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class SingularOperatorError(GramselError, RuntimeError):
    """The linearized Lyapunov operator is numerically singular."""


class LyapunovResidualError(GramselError, ArithmeticError):
    """A Lyapunov solve exceeded its guaranteed residual tolerance."""


class MetricEvaluationError(GramselError, RuntimeError):
    """A metric could not be evaluated on some subset.

    ``subset`` and ``metric`` identify where the failure happened; the
    original error is chained as ``__cause__``.
    """

    def __init__(self, message, subset=None, metric=None):
        super().__init__(message)
        self.subset = subset
        self.metric = metric


class EnumerationCapError(GramselError, ValueError):
    """An exhaustive enumeration would exceed its configured cap.

    ``count`` is the number of subsets or constraints that was refused.
    """

    def __init__(self, message, count=None):
        super().__init__(message)
        self.count = count


class NoAdmissibleSamplesError(GramselError, RuntimeError):
    """Every drawn sample had a degenerate (near-zero) denominator."""


class NoCertificateError(GramselError, ValueError):
    """A vacuous guarantee bound certifies nothing; no number is returned."""
