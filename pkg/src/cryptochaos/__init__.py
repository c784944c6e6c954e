"""Chaos-seeded hybrid encryption with an evaluation toolkit.

Four discrete chaotic maps seed a SHA3-256 chaos key, which is mixed with an
X25519 shared secret through BLAKE3 and HKDF to key AES-256-GCM. Around the
cipher sit the usual image-encryption metrics, a NIST SP 800-22 subset, a
Grover cost model and a multi-cipher benchmark harness.
"""

from .envelope import Envelope, decrypt_file, encrypt_file
from .errors import (
    AuthenticationError,
    ContributoryError,
    CryptoChaosError,
    EntropyUnavailableError,
    EnvelopeFormatError,
    InvalidInputError,
    ZeroVarianceError,
)
from .keyforge import generate_keypair

__version__ = "0.1.0"

__all__ = [
    "AuthenticationError",
    "ContributoryError",
    "CryptoChaosError",
    "EntropyUnavailableError",
    "Envelope",
    "EnvelopeFormatError",
    "InvalidInputError",
    "ZeroVarianceError",
    "decrypt_file",
    "encrypt_file",
    "generate_keypair",
]
