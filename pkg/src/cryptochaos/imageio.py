"""PGM (binary P5, maxval 255) I/O and the seeded synthetic test image."""

from __future__ import annotations

import hashlib
import os

import numpy as np

from .errors import InvalidInputError
from .metrics import ImageBuffer


def _tokens(data, count):
    """Split ``count`` whitespace-separated header tokens off ``data``.

    Returns the tokens and the offset of the single whitespace byte that
    terminates the last one.
    """
    out, i, n = [], 0, len(data)
    while len(out) < count:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i : i + 1] == b"#":
            while i < n and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        j = i
        while j < n and not data[j : j + 1].isspace() and data[j : j + 1] != b"#":
            j += 1
        if j == i:
            raise InvalidInputError("truncated PGM header")
        out.append(data[i:j])
        i = j
    return out, i


def parse_pgm(data: bytes) -> ImageBuffer:
    tokens, end = _tokens(data, 4)
    magic, w, h, maxval = tokens
    if magic != b"P5":
        raise InvalidInputError(f"not a binary PGM (magic {magic!r})")
    try:
        width, height, maxval = int(w), int(h), int(maxval)
    except ValueError as exc:
        raise InvalidInputError("malformed PGM header") from exc
    if maxval != 255:
        raise InvalidInputError(f"only maxval 255 is supported, got {maxval}")
    body = data[end + 1 :]
    if len(body) < width * height:
        raise InvalidInputError(
            f"PGM pixel data truncated: need {width * height}, have {len(body)}"
        )
    return ImageBuffer.from_bytes(width, height, body[: width * height])


def format_pgm(img: ImageBuffer) -> bytes:
    return b"P5\n%d %d\n255\n" % (img.width, img.height) + img.to_bytes()


def read_pgm(path) -> ImageBuffer:
    with open(path, "rb") as f:
        return parse_pgm(f.read())


def write_pgm(img: ImageBuffer, path):
    with open(os.fspath(path), "wb") as f:
        f.write(format_pgm(img))


def synthetic_image(seed: int = 0, width: int = 512, height: int = 512) -> ImageBuffer:
    """Deterministic benchmark image.

    Diagonal gradient ``(x + y) mod 256`` XOR the low nibble of a SHAKE-256
    stream keyed by the 64-bit seed. The gradient keeps visible structure
    and strong neighbour correlation; the nibble noise adds texture.
    """
    if not 0 <= seed < 2**64:
        raise InvalidInputError("seed must be an unsigned 64-bit integer")
    noise = hashlib.shake_256(b"cryptochaos-synth" + seed.to_bytes(8, "big")).digest(
        width * height
    )
    yy, xx = np.mgrid[0:height, 0:width]
    grad = ((xx + yy) & 0xFF).astype(np.uint8)
    px = grad ^ (np.frombuffer(noise, dtype=np.uint8).reshape(height, width) & 0x0F)
    return ImageBuffer(width, height, px)
