"""Exception types shared across the package."""


class BactlinkError(Exception):
    """Base class for all package errors."""


class ConfigError(BactlinkError):
    """A simulation parameter or trial configuration is invalid."""
