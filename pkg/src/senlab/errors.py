"""Error taxonomy shared by every module.

Each class maps to one CLI exit code, so library code raises these and the
front end only has to translate, never re-classify.
"""


class SenlabError(Exception):
    """Base class; carries an optional domain concept for error payloads."""

    exit_code = 1

    def __init__(self, message, concept=None):
        super().__init__(message)
        self.concept = concept


class UsageError(SenlabError):
    """Malformed input: schema violations, mixed primes, bad flags."""

    exit_code = 2


class DomainError(SenlabError):
    """A mathematical precondition fails (e.g. outside a convergence ball)."""

    exit_code = 3


class PrecisionError(SenlabError):
    """The stored precision cannot certify the requested answer."""

    exit_code = 4


class ConvergenceError(SenlabError):
    """A monitored series failed its termination rule."""

    exit_code = 5
