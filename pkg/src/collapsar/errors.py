"""Exceptions raised by collapsar beyond ordinary argument errors."""


class SqueezingOverflowError(OverflowError):
    """Squeezing too close to maximal for a faithful truncated representation.

    Raised when the requested mode sits so deep in the infrared (x below the
    configured floor) that the bosonic occupation distribution cannot be
    truncated within the dense-matrix budget.
    """


class NoSignChangeError(ValueError):
    """The supplied bracket does not straddle a zero of the target function."""
