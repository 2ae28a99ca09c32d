"""Exception hierarchy shared by the library and the command line."""


class EKZFTError(ValueError):
    """Base class for all errors raised by this package."""


class DomainError(EKZFTError):
    """A filter argument lies outside its admissible range."""


class SeriesTooShortError(EKZFTError):
    """The input series cannot hold a single full filter window."""

    def __init__(self, n, needed):
        super().__init__(
            f"series too short: length {n}, filter support needs at least {needed}"
        )
        self.n = n
        self.needed = needed


class DataError(EKZFTError):
    """Malformed or unusable input data."""
