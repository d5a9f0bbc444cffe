"""Exception types shared across the package."""


class MertensError(Exception):
    """Base class for all library errors."""


class DomainError(MertensError, ValueError):
    """An argument is outside the documented domain of an operation."""


class OutOfRangeError(MertensError):
    """A query needs primes beyond the table limit; never silently truncate."""


class ResourceLimitError(MertensError):
    """A computation would exceed a configured resource budget."""


class AccuracyError(MertensError):
    """Requested parameters cannot meet the documented accuracy."""


class ConvergenceError(MertensError):
    """Adaptive integration failed to converge within its subdivision budget.

    Carries the best estimate obtained so far.
    """

    def __init__(self, message, best_estimate, error_estimate):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class CacheFormatError(MertensError):
    """Prime cache file has the wrong magic or version."""


class CacheCorruptionError(MertensError):
    """Prime cache file is truncated or internally inconsistent."""


class VerificationError(MertensError):
    """A cross-method consistency check failed."""
