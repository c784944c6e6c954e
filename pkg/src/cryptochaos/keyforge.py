"""Layered key derivation.

passphrase -> per-map seeds -> 128-byte pre-key -> SHA3-256 chaos key,
then X25519 shared secret -> BLAKE3 compression -> HKDF-SHA256 with the
chaos key -> 32-byte AES-256-GCM key.

The exchange is ephemeral-static: the recipient keeps a long-term X25519
pair and the sender draws a fresh ephemeral pair for every message.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass

from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.asymmetric.x25519 import (
    X25519PrivateKey,
    X25519PublicKey,
)
from cryptography.hazmat.primitives.kdf.hkdf import HKDF

from ._blake3 import blake3
from ._secret import SecretBytes
from .chaos import MapSeedSet, PreKey, build_pre_key
from .errors import ContributoryError, EntropyUnavailableError, InvalidInputError

HKDF_INFO = b"CryptoChaos-v1-AES256GCM"

MAP_IDS = {"logistic": 0x01, "chebyshev": 0x02, "tent": 0x03, "henon": 0x04}


class Passphrase(SecretBytes):
    """UTF-8 passphrase bytes. Length is variable but at least one byte."""

    def __init__(self, data):
        if isinstance(data, str):
            data = data.encode("utf-8")
        data = bytes(data)
        if not data:
            raise InvalidInputError("passphrase must not be empty")
        self.size = len(data)
        super().__init__(data)


class ChaosKey(SecretBytes):
    size = 32


class SharedSecret(SecretBytes):
    size = 32


class FinalKey(SecretBytes):
    size = 32


class _X25519Secret(SecretBytes):
    size = 32


@dataclass(eq=False)
class RecipientKeypair:
    secret: _X25519Secret
    public: bytes

    @classmethod
    def from_secret(cls, secret: bytes) -> RecipientKeypair:
        clamped = clamp(secret)
        pub = X25519PrivateKey.from_private_bytes(clamped).public_key().public_bytes_raw()
        return cls(_X25519Secret(clamped), pub)

    def wipe(self):
        self.secret.wipe()

    def __repr__(self):
        return f"RecipientKeypair(public={self.public.hex()}, secret=<redacted>)"


def clamp(scalar: bytes) -> bytes:
    """Apply the X25519 scalar clamp."""
    if len(scalar) != 32:
        raise InvalidInputError(f"X25519 scalar must be 32 bytes, got {len(scalar)}")
    b = bytearray(scalar)
    b[0] &= 248
    b[31] &= 127
    b[31] |= 64
    return bytes(b)


def _as_passphrase(p):
    return p if isinstance(p, Passphrase) else Passphrase(p)


def derive_seeds(p) -> MapSeedSet:
    """``seed_i = SHA3-256(passphrase || 0x00 || map_id)`` for the four maps."""
    raw = bytes(_as_passphrase(p))
    return MapSeedSet(
        *(hashlib.sha3_256(raw + b"\x00" + bytes([mid])).digest() for mid in MAP_IDS.values())
    )


def derive_chaos_key(k) -> ChaosKey:
    raw = bytes(k)
    if len(raw) != PreKey.size:
        raise InvalidInputError(f"pre-key must be {PreKey.size} bytes, got {len(raw)}")
    return ChaosKey(hashlib.sha3_256(raw).digest())


def chaos_key_from_passphrase(p) -> ChaosKey:
    seeds = derive_seeds(p)
    pre = build_pre_key(seeds)
    try:
        return derive_chaos_key(pre)
    finally:
        seeds.wipe()
        pre.wipe()


def _draw(rng, n):
    try:
        out = bytes(rng(n))
    except Exception as exc:
        raise EntropyUnavailableError(f"randomness source failed: {exc}") from exc
    if len(out) != n:
        raise EntropyUnavailableError(f"randomness source returned {len(out)} of {n} bytes")
    return out


def generate_keypair(rng=os.urandom) -> RecipientKeypair:
    """Fresh clamped X25519 keypair. ``rng(n)`` must return ``n`` secure random bytes."""
    return RecipientKeypair.from_secret(_draw(rng, 32))


def agree(ephemeral_secret, recipient_public) -> SharedSecret:
    """X25519(ephemeral_secret, recipient_public).

    Raises ContributoryError when the peer point has small order, which
    forces the all-zero output.
    """
    sec, pub = bytes(ephemeral_secret), bytes(recipient_public)
    if len(sec) != 32 or len(pub) != 32:
        raise InvalidInputError("X25519 inputs must be 32 bytes each")
    try:
        out = X25519PrivateKey.from_private_bytes(sec).exchange(
            X25519PublicKey.from_public_bytes(pub)
        )
    except ValueError as exc:
        # OpenSSL refuses to return the all-zero secret.
        raise ContributoryError("low-order public key: all-zero shared secret") from exc
    if out == bytes(32):
        raise ContributoryError("low-order public key: all-zero shared secret")
    return SharedSecret(out)


def compress_shared_secret(s) -> bytes:
    return blake3(bytes(s)).digest(32)


def derive_final_key(s, c, salt: bytes) -> FinalKey:
    """HKDF-SHA256(ikm = BLAKE3(S) || K_chaos, salt, info = HKDF_INFO), 32 bytes."""
    s, c, salt = bytes(s), bytes(c), bytes(salt)
    for name, v in (("shared secret", s), ("chaos key", c), ("salt", salt)):
        if len(v) != 32:
            raise InvalidInputError(f"{name} must be 32 bytes, got {len(v)}")
    hkdf = HKDF(algorithm=hashes.SHA256(), length=32, salt=salt, info=HKDF_INFO)
    return FinalKey(hkdf.derive(compress_shared_secret(s) + c))


def public_key_of(secret) -> bytes:
    return X25519PrivateKey.from_private_bytes(bytes(secret)).public_key().public_bytes_raw()


# Recipient key files: 32 raw secret bytes, public key as lowercase hex + "\n".


def write_keypair(kp: RecipientKeypair, path):
    path = os.fspath(path)
    fd = os.open(path, os.O_WRONLY | os.O_CREAT | os.O_TRUNC, 0o600)
    with os.fdopen(fd, "wb") as f:
        f.write(bytes(kp.secret))
    os.chmod(path, 0o600)
    with open(path + ".pub", "w", encoding="ascii", newline="\n") as f:
        f.write(format_public_key(kp.public))


def format_public_key(public: bytes) -> str:
    return bytes(public).hex() + "\n"


def read_public_key(path) -> bytes:
    with open(path, encoding="ascii") as f:
        text = f.read()
    if not text.endswith("\n") or len(text) != 65:
        raise InvalidInputError(f"{path}: public key must be 64 hex characters and a newline")
    body = text[:-1]
    if body != body.lower():
        raise InvalidInputError(f"{path}: public key hex must be lowercase")
    try:
        return bytes.fromhex(body)
    except ValueError as exc:
        raise InvalidInputError(f"{path}: public key is not valid hex") from exc


def read_secret_key(path) -> RecipientKeypair:
    with open(path, "rb") as f:
        raw = f.read()
    if len(raw) != 32:
        raise InvalidInputError(f"{path}: secret key must be 32 raw bytes, got {len(raw)}")
    return RecipientKeypair.from_secret(raw)
