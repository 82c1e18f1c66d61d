class CapExceeded(ValueError):
    """An instance is larger than the configured enumeration or matrix cap."""


class PreconditionError(ValueError):
    """Inputs fall outside the range where an operation is defined."""
