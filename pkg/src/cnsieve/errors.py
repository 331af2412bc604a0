"""Exception types shared across the package."""


class CnsieveError(Exception):
    pass


class RangeError(CnsieveError, ValueError):
    """A query or bound falls outside what a table or sieve run covers."""


class ValidationError(CnsieveError, ValueError):
    """Malformed pattern, kind, or argument."""


class PreconditionError(CnsieveError, ValueError):
    """Inputs are well formed but the supporting data is insufficient."""
