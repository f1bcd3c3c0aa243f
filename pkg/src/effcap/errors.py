"""Exception types raised by effcap."""


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class EstimationError(RuntimeError):
    """Queue-tail estimation could not be carried out."""


class ConfigError(ValueError):
    """A run configuration is malformed or inconsistent."""
