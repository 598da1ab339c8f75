"""Shared exception types."""


class ConfigurationError(ValueError):
    """A config value is out of range or otherwise unusable."""


class ProtocolError(RuntimeError):
    """An operation was called in a state that forbids it (e.g. step after terminal)."""


class CompatibilityError(ValueError):
    """An agent/environment pairing that cannot work together."""
