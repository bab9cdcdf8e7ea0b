"""Exception hierarchy shared by every qprob module."""


class QProbError(Exception):
    """Base class for all qprob errors."""


class NotHermitian(QProbError, ValueError):
    pass


class EmptyMatrix(QProbError, ValueError):
    pass


class NotProjection(QProbError, ValueError):
    pass


class BadExponent(QProbError, ValueError):
    pass


class BadThreshold(QProbError, ValueError):
    pass


class BadAlpha(QProbError, ValueError):
    pass


class EigenFailure(QProbError, ArithmeticError):
    pass


class DimMismatch(QProbError, ValueError):
    pass


class EmptyFamily(QProbError, ValueError):
    pass


class DimOverflow(QProbError, ValueError):
    pass


class NotSymmetric(QProbError, ValueError):
    pass


class NonUniformizable(QProbError, ValueError):
    pass


class CapExceeded(QProbError, ValueError):
    pass


class HypothesisFailed(QProbError):
    """A theorem hypothesis was checked numerically and did not hold.

    ``hypothesis`` names the failing check and ``deviation`` is the measured
    violation, so callers can route the failure into a report.
    """

    def __init__(self, hypothesis, deviation, message=None):
        self.hypothesis = hypothesis
        self.deviation = float(deviation)
        super().__init__(message or f"hypothesis {hypothesis!r} failed (deviation {deviation:.3g})")


class DegenerateAngleWarning(UserWarning):
    """Null-space eigenvalue of a meet fell in the ambiguous band above tol_null."""
