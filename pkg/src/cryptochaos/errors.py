"""Exception hierarchy shared by every module in the package."""


class CryptoChaosError(Exception):
    """Base class for all package errors."""


class InvalidInputError(CryptoChaosError, ValueError):
    """An argument violates an operation's precondition."""


class EntropyUnavailableError(CryptoChaosError):
    """The randomness source failed to deliver bytes."""


class ContributoryError(CryptoChaosError):
    """X25519 produced the all-zero shared secret (low-order peer point)."""


class AuthenticationError(CryptoChaosError):
    """AEAD tag verification failed. No plaintext is released."""


class EnvelopeFormatError(AuthenticationError):
    """A serialized envelope could not be parsed.

    ``kind`` is one of ``"magic"``, ``"version"`` or ``"length"`` so callers
    can tell structural faults apart. It subclasses AuthenticationError
    because a damaged header is also an integrity failure: code that only
    asks "did this envelope verify?" catches both.
    """

    def __init__(self, kind, message):
        super().__init__(message)
        self.kind = kind


class ZeroVarianceError(InvalidInputError):
    """Correlation requested on a constant sequence."""
