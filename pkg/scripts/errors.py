"""
Error types for the conifold wall-crossing toolkit
Every domain failure raised by the library derives from WallCrossingError
"""


class WallCrossingError(Exception):
    """Base class for all domain errors."""


class PreconditionError(WallCrossingError, ValueError):
    """An operation was called outside its domain."""


class DimensionMismatchError(PreconditionError):
    """Two objects live in different ambient ranks."""


class UnsupportedWeightError(PreconditionError):
    """Only polynomial (entrywise non-negative) characters are supported."""


class VerificationFailure(WallCrossingError):
    """Raised by verification.require when a report did not pass."""

    def __init__(self, report: dict):
        self.report = report
        failure = report.get('first_failure')
        super().__init__(f"{report.get('name', 'check')} failed at {failure}")
