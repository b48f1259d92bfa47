"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid configuration input (bad value, unknown key, unsupported model)."""
