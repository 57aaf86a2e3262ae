"""Exception types shared across the package."""


class RelayBoundsError(Exception):
    """Base class for all package errors."""


class NegativePower(RelayBoundsError):
    """A power or variance parameter is negative (or not finite)."""


class NonPositiveNoise(RelayBoundsError):
    """A noise variance is zero or negative."""


class DomainError(RelayBoundsError):
    """An objective was evaluated where one of its logarithms is undefined."""


class ConstraintViolated(RelayBoundsError):
    """Parameters fall outside the feasible region of a bound."""


class NotDegraded(RelayBoundsError):
    """A degraded-channel-only operation was applied to a non-degraded channel."""


class NoFeasiblePoint(RelayBoundsError):
    """Every grid point of a maximization was infeasible."""


class BadGrouping(RelayBoundsError):
    """Mutual-information variable groups overlap or name unknown axes."""


class InvalidFactorization(RelayBoundsError):
    """A joint pmf does not factor (or normalize) as required."""


class CardinalityExceeded(RelayBoundsError):
    """Requested auxiliary alphabet size exceeds the supported cap."""


class InfeasibleCovariance(RelayBoundsError):
    """Requested correlation targets do not yield a valid covariance matrix."""


class SingularCovariance(RelayBoundsError):
    """Sample covariance stayed singular even after ridge regularization."""


class ConfigError(RelayBoundsError):
    """Malformed configuration document (CLI / JSON ingestion)."""
