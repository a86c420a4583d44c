class CakeError(ValueError):
    """Base class for every error raised by the package."""


class InvalidInstanceError(CakeError):
    """A valuation, instance or input file does not satisfy its invariants."""


class DomainError(CakeError):
    """A query or helper was called with arguments outside its domain."""


class PreconditionError(CakeError):
    """An algorithm was called on an input it is not defined for."""


class EnumerationCapError(CakeError):
    """Brute-force enumeration refused an instance with too many agents."""


class ConfigurationError(CakeError):
    """The configuration file or environment holds an unusable value."""
