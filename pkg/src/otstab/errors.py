"""Exception types shared across the library."""


class OTStabError(Exception):
    """Base class for all library errors."""


class DomainError(OTStabError, ValueError):
    """Invalid point, spec mismatch, or unsupported geometric input."""


class CutLocusError(DomainError):
    """Geodesic inversion requested at or beyond the cut locus."""


class CapacityError(OTStabError):
    """Problem size exceeds a documented desk-scale cap."""


class ConfigurationError(OTStabError, ValueError):
    """Inconsistent sampler or experiment configuration."""


class PreconditionError(OTStabError, ValueError):
    """Input violates a documented operation precondition."""


class ConvergenceError(OTStabError, RuntimeError):
    """Iterative solver failed to reach tolerance.

    Carries the last solver state in ``state`` so callers can inspect or
    resume the run.
    """

    def __init__(self, message: str, state=None):
        super().__init__(message)
        self.state = state
