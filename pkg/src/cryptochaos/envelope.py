"""AES-256-GCM sealing and the ``.cch`` container.

Byte layout (all integers big-endian)::

    magic      4   b"CCH1"
    version    1   0x01
    eph_pub   32   sender's ephemeral X25519 public key
    salt      32   HKDF salt
    nonce     12   GCM nonce
    ct_len     8   ciphertext length
    ct        ct_len
    tag       16   GCM tag

magic, version, eph_pub and salt are bound as associated data.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from . import keyforge
from .errors import AuthenticationError, EnvelopeFormatError, InvalidInputError

MAGIC = b"CCH1"
VERSION = 0x01
NONCE_LEN = 12
TAG_LEN = 16
SALT_LEN = 32
PUB_LEN = 32
HEADER_LEN = 4 + 1 + PUB_LEN + SALT_LEN + NONCE_LEN + 8
OVERHEAD = HEADER_LEN + TAG_LEN
FILE_SUFFIX = ".cch"

_LEN = struct.Struct(">Q")


@dataclass(frozen=True)
class Envelope:
    ephemeral_public: bytes
    salt: bytes
    nonce: bytes
    ciphertext: bytes
    tag: bytes
    version: int = VERSION

    @property
    def associated_data(self):
        return MAGIC + bytes([self.version]) + self.ephemeral_public + self.salt

    def to_bytes(self) -> bytes:
        return b"".join(
            (
                self.associated_data,
                self.nonce,
                _LEN.pack(len(self.ciphertext)),
                self.ciphertext,
                self.tag,
            )
        )

    @classmethod
    def from_bytes(cls, data) -> Envelope:
        data = bytes(data)
        if len(data) < 5:
            raise EnvelopeFormatError("length", f"truncated envelope: {len(data)} bytes")
        if data[:4] != MAGIC:
            raise EnvelopeFormatError("magic", "bad magic: not a CCH1 envelope")
        if data[4] != VERSION:
            raise EnvelopeFormatError("version", f"unsupported version 0x{data[4]:02x}")
        if len(data) < OVERHEAD:
            raise EnvelopeFormatError("length", f"truncated envelope: {len(data)} bytes")
        (ct_len,) = _LEN.unpack_from(data, HEADER_LEN - 8)
        if len(data) != OVERHEAD + ct_len:
            raise EnvelopeFormatError(
                "length",
                f"length mismatch: header declares {ct_len} ciphertext bytes, "
                f"file holds {len(data) - OVERHEAD}",
            )
        p = 5
        eph = data[p : p + PUB_LEN]
        p += PUB_LEN
        salt = data[p : p + SALT_LEN]
        p += SALT_LEN
        nonce = data[p : p + NONCE_LEN]
        p += NONCE_LEN + 8
        return cls(eph, salt, nonce, data[p : p + ct_len], data[p + ct_len :])


def _check_key(key):
    key = bytes(key)
    if len(key) != 32:
        raise InvalidInputError(f"AES-256-GCM key must be 32 bytes, got {len(key)}")
    return key


def seal(
    key,
    plaintext,
    rng=os.urandom,
    *,
    ephemeral_public=bytes(PUB_LEN),
    salt=bytes(SALT_LEN),
    nonce=None,
) -> Envelope:
    """Encrypt ``plaintext`` under ``key`` with a fresh random 96-bit nonce.

    ``nonce`` exists so tests can pin known-answer vectors; production
    callers leave it unset.
    """
    key = _check_key(key)
    if nonce is None:
        nonce = keyforge._draw(rng, NONCE_LEN)
    elif len(nonce) != NONCE_LEN:
        raise InvalidInputError(f"nonce must be {NONCE_LEN} bytes")
    if len(ephemeral_public) != PUB_LEN or len(salt) != SALT_LEN:
        raise InvalidInputError("ephemeral public key and salt must be 32 bytes each")
    env = Envelope(bytes(ephemeral_public), bytes(salt), bytes(nonce), b"", b"")
    out = AESGCM(key).encrypt(env.nonce, bytes(plaintext), env.associated_data)
    return Envelope(env.ephemeral_public, env.salt, env.nonce, out[:-TAG_LEN], out[-TAG_LEN:])


def open(key, e: Envelope) -> bytes:  # noqa: A001
    key = _check_key(key)
    try:
        return AESGCM(key).decrypt(e.nonce, e.ciphertext + e.tag, e.associated_data)
    except InvalidTag:
        raise AuthenticationError("authentication failed") from None


def encrypt_file(
    passphrase,
    recipient_public,
    plaintext,
    rng=os.urandom,
    *,
    ephemeral_secret=None,
    salt=None,
    nonce=None,
) -> bytes:
    """Full pipeline: chaos key + ephemeral-static X25519 + HKDF + AES-GCM.

    Pinning ``ephemeral_secret``, ``salt`` and ``nonce`` makes the output
    deterministic (tests only).
    """
    chaos = keyforge.chaos_key_from_passphrase(passphrase)
    if ephemeral_secret is None:
        eph = keyforge.generate_keypair(rng)
    else:
        eph = keyforge.RecipientKeypair.from_secret(ephemeral_secret)
    if salt is None:
        salt = keyforge._draw(rng, SALT_LEN)
    shared = keyforge.agree(eph.secret, recipient_public)
    key = keyforge.derive_final_key(shared, chaos, salt)
    try:
        env = seal(key, plaintext, rng, ephemeral_public=eph.public, salt=salt, nonce=nonce)
    finally:
        for secret in (chaos, shared, key, eph):
            secret.wipe()
    return env.to_bytes()


def decrypt_file(passphrase, recipient_secret, serialized) -> bytes:
    """Inverse of :func:`encrypt_file`.

    A wrong passphrase and a wrong recipient key both surface as the same
    AuthenticationError.
    """
    env = Envelope.from_bytes(serialized)
    if isinstance(recipient_secret, keyforge.RecipientKeypair):
        recipient_secret = recipient_secret.secret
    chaos = keyforge.chaos_key_from_passphrase(passphrase)
    try:
        shared = keyforge.agree(recipient_secret, env.ephemeral_public)
    except keyforge.ContributoryError:
        # A tampered ephemeral key must look like any other forgery.
        chaos.wipe()
        raise AuthenticationError("authentication failed") from None
    key = keyforge.derive_final_key(shared, chaos, env.salt)
    try:
        return open(key, env)
    finally:
        for secret in (chaos, shared, key):
            secret.wipe()
