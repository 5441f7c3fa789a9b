"""Exception types shared across the package."""


class ModelError(ValueError):
    """Malformed input: bad table, inconsistent dimensions, invalid certificate."""


class PreconditionError(ValueError):
    """An operation was called on arguments outside its domain."""


class UnsupportedError(NotImplementedError):
    """The request is meaningful but outside what the chosen backend can decide."""
