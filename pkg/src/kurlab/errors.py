"""Exception hierarchy shared by the library and the CLI exit-code contract."""


class KurlabError(Exception):
    exit_code = 1


class InputError(KurlabError, ValueError):
    """Malformed or out-of-domain input (foreign letter, bad token, invalid topology)."""

    exit_code = 2


class PreconditionError(InputError):
    pass


class ResourceError(KurlabError):
    """A configured size cap would be exceeded."""

    exit_code = 3

    def __init__(self, message, cap=None, frontier=None):
        super().__init__(message)
        self.cap = cap
        self.frontier = frontier


class ConsistencyError(KurlabError):
    """An internal cross-check failed (e.g. a witness component does not separate)."""

    exit_code = 1
