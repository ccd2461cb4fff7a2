"""Error types shared across the package.

CLI exit codes: InputError -> 2, CapExceeded -> 3, property violations -> 1.
"""


class InvgenError(Exception):
    pass


class InputError(InvgenError):
    """Malformed descriptor, file, or argument."""


class CapExceeded(InvgenError):
    """A size cap was hit; the message names the cap."""


class PreconditionError(InvgenError):
    """An operation was called outside its stated hypotheses."""
