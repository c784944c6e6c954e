"""Deterministic randomness for tests, benchmarks and ``--seed`` runs.

Never used for production key material: encryption defaults to
``os.urandom``.
"""

import hashlib

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms


class SeededRandom:
    """ChaCha20 keystream keyed by SHA-256 of a 64-bit seed.

    Instances are callables ``rng(n) -> bytes`` so they plug in wherever an
    entropy source is expected. Successive calls continue the same stream.
    """

    def __init__(self, seed: int):
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.seed = seed
        key = hashlib.sha256(b"cryptochaos-rng" + seed.to_bytes(8, "big")).digest()
        self._enc = Cipher(algorithms.ChaCha20(key, bytes(16)), mode=None).encryptor()

    def __call__(self, n: int) -> bytes:
        return self._enc.update(bytes(n))

    def randbelow(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection sampling."""
        if bound < 1:
            raise ValueError("bound must be positive")
        nbytes = (bound.bit_length() + 7) // 8 + 1
        limit = (256**nbytes // bound) * bound
        while True:
            v = int.from_bytes(self(nbytes), "big")
            if v < limit:
                return v % bound
