"""Statistical and visual quality metrics for ciphertext images."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, ZeroVarianceError


@dataclass(frozen=True, eq=False)
class ImageBuffer:
    """8-bit grayscale image, row-major."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise InvalidInputError("image dimensions must be positive")
        px = np.frombuffer(bytes(self.pixels), dtype=np.uint8) if isinstance(
            self.pixels, (bytes, bytearray, memoryview)
        ) else np.asarray(self.pixels, dtype=np.uint8).ravel()
        if px.size != self.width * self.height:
            raise InvalidInputError(
                f"pixel count {px.size} != {self.width}x{self.height}"
            )
        object.__setattr__(self, "pixels", px)

    @classmethod
    def from_bytes(cls, width, height, data):
        return cls(width, height, np.frombuffer(bytes(data), dtype=np.uint8))

    def to_bytes(self):
        return self.pixels.tobytes()

    def as_array(self):
        return self.pixels.reshape(self.height, self.width)

    def __eq__(self, other):
        if not isinstance(other, ImageBuffer):
            return NotImplemented
        return (
            (self.width, self.height) == (other.width, other.height)
            and np.array_equal(self.pixels, other.pixels)
        )


@dataclass(frozen=True, eq=False)
class ByteHistogram:
    counts: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.counts, dtype=np.int64)
        if c.shape != (256,) or (c < 0).any():
            raise InvalidInputError("histogram needs 256 non-negative counts")
        object.__setattr__(self, "counts", c)

    @property
    def total(self):
        return int(self.counts.sum())

    @classmethod
    def of(cls, data):
        return cls(np.bincount(_as_u8(data), minlength=256))


def _as_u8(data):
    if isinstance(data, ImageBuffer):
        return data.pixels
    if isinstance(data, (bytes, bytearray, memoryview)):
        return np.frombuffer(bytes(data), dtype=np.uint8)
    return np.asarray(data, dtype=np.uint8).ravel()


def _hist(h):
    return h if isinstance(h, ByteHistogram) else ByteHistogram.of(h)


def shannon_entropy(h) -> float:
    """Shannon entropy in bits per byte. Accepts a histogram or raw bytes."""
    h = _hist(h)
    total = h.total
    if total < 1:
        raise InvalidInputError("entropy of an empty histogram is undefined")
    p = h.counts[h.counts > 0] / total
    return float(max(0.0, -(p * np.log2(p)).sum()))


def adjacent_correlation(data) -> float:
    """Pearson correlation between consecutive bytes ``(d[i], d[i+1])``."""
    d = _as_u8(data).astype(np.float64)
    if d.size < 3:
        raise InvalidInputError("adjacent correlation needs at least 3 bytes")
    x, y = d[:-1], d[1:]
    x = x - x.mean()
    y = y - y.mean()
    denom = math.sqrt(float(x @ x) * float(y @ y))
    if denom == 0.0:
        raise ZeroVarianceError("adjacent correlation undefined: zero variance")
    return float(np.clip((x @ y) / denom, -1.0, 1.0))


def histogram_uniformity(h) -> float:
    """One minus the normalized total-variation distance from uniform.

    ``1 - sum|c_i - total/256| / (2 * total * (1 - 1/256))``: 1.0 for a flat
    histogram, 0.0 when every byte lands in one bin.
    """
    h = _hist(h)
    total = h.total
    if total < 1:
        raise InvalidInputError("uniformity of an empty histogram is undefined")
    tv = np.abs(h.counts - total / 256).sum()
    return float(np.clip(1.0 - tv / (2 * total * (1 - 1 / 256)), 0.0, 1.0))


def _pair(c1, c2):
    a, b = _as_u8(c1), _as_u8(c2)
    if isinstance(c1, ImageBuffer) and isinstance(c2, ImageBuffer):
        if (c1.width, c1.height) != (c2.width, c2.height):
            raise InvalidInputError(
                f"dimension mismatch: {c1.width}x{c1.height} vs {c2.width}x{c2.height}"
            )
    if a.size != b.size:
        raise InvalidInputError(f"size mismatch: {a.size} vs {b.size}")
    if a.size == 0:
        raise InvalidInputError("empty images")
    return a, b


def npcr(c1, c2) -> float:
    """Percentage of pixel positions whose values differ."""
    a, b = _pair(c1, c2)
    return float(100.0 * np.count_nonzero(a != b) / a.size)


def uaci(c1, c2) -> float:
    """Mean absolute intensity difference as a percentage of 255."""
    a, b = _pair(c1, c2)
    diff = np.abs(a.astype(np.int16) - b.astype(np.int16))
    return float(100.0 * diff.sum() / (255.0 * a.size))


def mse_psnr(p, c) -> tuple[float, float]:
    a, b = _pair(p, c)
    diff = a.astype(np.int32) - b.astype(np.int32)
    mse = float((diff * diff).sum() / a.size)
    psnr = math.inf if mse == 0 else 10 * math.log10(255**2 / mse)
    return mse, psnr
