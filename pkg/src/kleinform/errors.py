"""Exception types shared across the package."""


class KleinformError(Exception):
    """Base class for every domain error raised by this package."""


class ValidationError(KleinformError):
    """Constructed object violates a structural invariant (bad table, bad cochain, ...)."""


class WindowError(KleinformError):
    """A lift was evaluated, or a system posed, outside its solved window."""


class CertificateError(KleinformError):
    """An internal re-verification failed.  This is a bug, not a user error."""
