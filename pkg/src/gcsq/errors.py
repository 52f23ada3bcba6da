"""Exception types shared across the package."""
from __future__ import annotations


class PartitionError(ValueError):
    """A coalition list is not a valid partition of the agent set."""


class CapacityError(ValueError):
    """Problem size exceeds what an exact solver can handle."""


class DimensionError(ValueError):
    """Assignment length does not match the problem size."""


class TransportError(RuntimeError):
    """Remote solver unreachable after the configured retries."""

    def __init__(self, message: str, attempts: int = 0):
        super().__init__(message)
        self.attempts = attempts


class SolveTimeoutError(RuntimeError):
    """Remote job did not finish within the deadline.

    ``partial_samples`` holds whatever samples the service reported before
    the deadline (possibly empty).
    """

    def __init__(self, message: str, partial_samples=()):
        super().__init__(message)
        self.partial_samples = list(partial_samples)


class IntegrityError(RuntimeError):
    """A reported value contradicts local recomputation."""


class InstanceFormatError(ValueError):
    """Instance file is malformed; the message names the offending field."""


class DegenerateFitError(ValueError):
    """Linear fit requested on fewer than two distinct x values."""


class SolverAborted(RuntimeError):
    """Divisive run aborted by a backend failure; carries the partial trace."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace
