class PolyflagError(Exception):
    """Base class for library errors."""


class InputError(PolyflagError, ValueError):
    """Malformed or inconsistent input data."""


class CapExceeded(PolyflagError):
    """A combinatorial size cap was exceeded."""


class CheckFailed(PolyflagError):
    """A structural check failed; ``witness`` carries the offending data."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
