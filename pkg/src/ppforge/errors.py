"""Exception hierarchy.

Two families matter to callers: bad input (``InputError``, a ``ValueError``)
and a mathematical check that came out false (``NotBijectiveError``,
``VerificationError``).  Both of the latter carry a ``witness``.
"""


class PPForgeError(Exception):
    pass


class InputError(PPForgeError, ValueError):
    pass


class CeilingExceeded(InputError):
    pass


class DiagramError(InputError):
    """A diagram does not commute or a projection is not surjective."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotBijectiveError(PPForgeError):
    """A map expected to be bijective is not.

    ``witness`` is a colliding pair ``(a, b)`` with equal images, or a missed
    value, whichever the caller could produce.
    """

    def __init__(self, message, witness=None, index=None):
        super().__init__(message)
        self.witness = witness
        self.index = index


class VerificationError(PPForgeError):
    """An internal cross-check disagreed with an independent oracle."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
