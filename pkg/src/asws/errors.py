"""Exception types raised across the package."""


class AswsError(Exception):
    """Base class for all errors raised by this package."""


class InsufficientData(AswsError):
    """A series is too short for the requested operation."""


class InvalidSampleSize(AswsError):
    """A sample size is outside the supported range of a statistical test."""


class DegenerateSample(AswsError):
    """A sample has zero variance, so the test statistic is undefined."""


class InvalidDegreesOfFreedom(AswsError):
    """Degrees of freedom must be a positive integer."""


class InvalidClip(AswsError):
    """Smoothing clip point must be smaller than the series length."""


class InvalidEpoch(AswsError):
    """An epoch index lies outside the recorded range."""


class InvalidConfig(AswsError):
    """A configuration value violates its documented bounds."""


class ConstraintInfeasible(AswsError):
    """No sweep candidate satisfied the accuracy constraint.

    Carries the unconstrained optimum so callers can inspect what the
    sweep would have chosen without the constraint.
    """

    def __init__(self, message, unconstrained_best=None):
        super().__init__(message)
        self.unconstrained_best = unconstrained_best


class NotFound(AswsError):
    """A requested file or directory does not exist."""


class ParseError(AswsError):
    """A data file does not conform to its schema.

    Carries the offending path and, when known, the 1-based line number.
    """

    def __init__(self, message, path=None, line=None):
        super().__init__(message)
        self.path = path
        self.line = line


class ValidationError(AswsError):
    """A parsed value is out of range or otherwise inadmissible."""

    def __init__(self, message, path=None, line=None):
        super().__init__(message)
        self.path = path
        self.line = line


class ProtocolError(AswsError):
    """A sidecar message violated the session protocol."""

    def __init__(self, reason, message=None):
        super().__init__(message or reason)
        self.reason = reason
