"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`MQSPError`
so callers (the CLI in particular) can separate semantic failures from bugs.
"""


class MQSPError(Exception):
    """Base class for all library errors."""


class DomainError(MQSPError, ValueError):
    """A polynomial with negative exponents was evaluated at z = 0."""


class DimensionMismatch(MQSPError, ValueError):
    pass


class DegenerateInput(MQSPError, ValueError):
    """Designated columns are zero or not mutually orthogonal."""


class PreconditionViolated(MQSPError, ValueError):
    """A^dagger B is not lower triangular within tolerance."""


class InvalidState(MQSPError, ValueError):
    """The state does not satisfy <gamma(z)|gamma(z)> = 1."""


class DegreeZero(MQSPError, ValueError):
    pass


class DegreeTooHigh(MQSPError, ValueError):
    pass


class ConditionNotMet(MQSPError, ValueError):
    """Gamma_0^dagger Gamma_{n-D+1} is not lower triangular."""

    def __init__(self, message, max_violation):
        super().__init__(message)
        self.max_violation = max_violation


class OrthogonalityViolated(MQSPError, ValueError):
    def __init__(self, message, max_overlap):
        super().__init__(message)
        self.max_overlap = max_overlap


class ParityViolated(MQSPError, ValueError):
    pass


class RangeExceeded(MQSPError, ValueError):
    pass


class NotNonnegative(MQSPError, ValueError):
    def __init__(self, message, minimum):
        super().__init__(message)
        self.minimum = minimum


class UnpairedRoots(MQSPError, ValueError):
    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class NormExceeded(MQSPError, ValueError):
    def __init__(self, message, worst_theta, worst_value):
        super().__init__(message)
        self.worst_theta = worst_theta
        self.worst_value = worst_value


class NotNormalized(MQSPError, ValueError):
    pass


class ArcSpecInvalid(MQSPError, ValueError):
    pass


class NotHermitian(MQSPError, ValueError):
    """Coefficients of z^m and z^-m are not complex conjugates."""


class CompletionFailed(MQSPError, RuntimeError):
    """Spectral factorization did not reproduce R within tolerance."""
