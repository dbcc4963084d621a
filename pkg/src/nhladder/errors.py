"""Exception taxonomy shared across the package."""


class LadderError(Exception):
    """Base class for all package errors."""


class ConfigError(LadderError):
    """Invalid parameters, config files, or CLI usage."""


class NumericsError(LadderError):
    """A computation hit a singular or out-of-domain configuration."""
