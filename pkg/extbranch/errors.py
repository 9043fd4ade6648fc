"""
Exception hierarchy for extbranch.

Every error also subclasses ValueError, so callers that only care about
"bad input" can catch the builtin.
"""


class ExtBranchError(Exception):
    """Base class for all extbranch errors."""


class InvalidHistoryError(ExtBranchError, ValueError):
    """An ordered history violates a structural invariant."""


class InvalidPermutationError(ExtBranchError, ValueError):
    """A sequence is not a permutation of 1..m."""


class EnumerationBoundError(ExtBranchError, ValueError):
    """Exhaustive enumeration requested above the configured bound."""


class SupportError(ExtBranchError, ValueError):
    """Arguments fall outside the domain an operation is defined on."""


class RecursionRangeError(ExtBranchError, ValueError):
    """The joint recurrence would need a history smaller than 3 leaves."""


class BackendError(ExtBranchError, ValueError):
    """Backend choice is incompatible with the requested computation."""


class GofMismatchError(ExtBranchError, ValueError):
    """Empirical and exact distributions describe different (n, k)."""
