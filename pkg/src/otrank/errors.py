"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or inconsistent input (unknown symbol, bad file, violated precondition)."""


class ResourceLimitError(RuntimeError):
    """A configured state-count or enumeration ceiling was exceeded."""
