"""
Exception hierarchy for popmatch.

Errors caused by bad input also derive from ``ValueError`` so callers that
only know the standard library can still catch them.
"""

from typing import Optional, Tuple


class PopmatchError(Exception):
    """Base class of every popmatch error."""


class InstanceSyntaxError(PopmatchError, ValueError):
    """A line of an instance, matching or cost file does not follow its grammar."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateApplicantError(InstanceSyntaxError):
    """The same applicant identifier is declared twice."""


class DuplicatePostError(InstanceSyntaxError):
    """A post occurs twice in one preference list."""


class ReservedIdentifierError(InstanceSyntaxError):
    """An identifier uses the last-resort prefix or is both an applicant and a post."""


class InvalidMatchingError(PopmatchError, ValueError):
    """A set of pairs is not a matching over the acceptable pairs, or is not applicant-complete."""


class CostDomainError(PopmatchError, ValueError):
    """A cost was given for a pair outside E2."""

    def __init__(self, message: str, pair: Optional[Tuple[str, str]] = None):
        self.pair = pair
        super().__init__(message)


class UnknownCriterionError(PopmatchError, ValueError):
    """The requested optimization criterion does not exist."""


class NoPopularMatchingError(PopmatchError):
    """The instance admits no popular matching."""


class InstanceTooLargeForOracleError(PopmatchError):
    """The instance exceeds the brute-force oracle's size guard."""


class InfeasibleNetworkError(PopmatchError):
    """The flow network cannot carry the requested amount of flow."""


class InvariantViolationError(PopmatchError, AssertionError):
    """A runtime self-check failed; this signals a bug, not bad input."""
