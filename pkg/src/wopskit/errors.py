"""Exception hierarchy shared by all wopskit modules."""

from __future__ import annotations


class WopsError(Exception):
    """Base class for every error raised by wopskit."""


class ShapeMismatch(WopsError, ValueError):
    pass


class DimensionMismatch(WopsError, ValueError):
    pass


class BadParameter(WopsError, ValueError):
    pass


class BadIndex(WopsError, ValueError):
    pass


class Inconsistent(WopsError):
    """A linear system AX = B has no solution."""


class RankDeficient(WopsError):
    """A matrix expected to have full column rank does not."""


class NotQuasiDefinite(WopsError):
    """The moment functional admits no WOPS; ``degree`` is the first failing degree."""

    def __init__(self, degree: int, message: str | None = None):
        self.degree = degree
        super().__init__(message or f"moment functional is not quasi-definite at degree {degree}")


class DegreeOverflow(WopsError, ValueError):
    pass


class IdentityViolation(WopsError):
    """An identity that must hold exactly failed; indicates a bug or bad input data."""


class BandViolation(WopsError):
    """A coefficient outside the predicted band is nonzero."""

    def __init__(self, message: str, indices: list[int] | None = None):
        self.indices = list(indices or [])
        super().__init__(message)


class NoSolution(WopsError):
    pass


class CrossCheckFailure(WopsError):
    pass


class VerificationFailure(WopsError):
    pass
