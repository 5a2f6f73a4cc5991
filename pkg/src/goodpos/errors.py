"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Unsupported type, rank, twist or field parameters."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class ResourceError(RuntimeError):
    """An enumeration would exceed the configured size bounds."""


class DependencyError(RuntimeError):
    """A required upstream artifact (e.g. a certificate) is missing."""


class ExistenceFailure(RuntimeError):
    """No class member could be certified within the exponent bound."""

    def __init__(self, message, d_max=None):
        super().__init__(message)
        self.d_max = d_max


class TheoremViolation(AssertionError):
    """A brute-force check contradicted a structural statement."""
