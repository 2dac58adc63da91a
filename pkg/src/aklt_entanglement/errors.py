"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument lies outside the domain of the requested quantity."""


class ResourceError(RuntimeError):
    """A dense construction would exceed the configured size guard."""
