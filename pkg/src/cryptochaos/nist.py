"""Seven statistical tests from NIST SP 800-22 rev 1a.

monobit, block frequency, runs, longest run of ones, spectral (DFT),
non-overlapping template matching and serial. Each test returns a
:class:`NistResult`; a test passes when every p-value is >= ``ALPHA``.

Every test enforces the minimum sequence length recommended by NIST and
raises InvalidInputError below it. ``enforce_min=False`` lifts the check
for textbook-sized worked examples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import InvalidInputError
from .special import erfc, igamc

ALPHA = 0.01
DEFAULT_TEMPLATE = "000000001"
TEMPLATE_BLOCKS = 8

MIN_LENGTH = {
    "monobit": 100,
    "block_frequency": 100,
    "runs": 100,
    "longest_run": 128,
    "spectral": 1000,
}


class BitSequence:
    """Immutable sequence of bits backed by a uint8 numpy array."""

    __slots__ = ("bits",)

    def __init__(self, bits):
        arr = np.asarray(bits, dtype=np.uint8).ravel()
        if arr.size < 1:
            raise InvalidInputError("bit sequence must not be empty")
        if (arr > 1).any():
            raise InvalidInputError("bits must be 0 or 1")
        arr.setflags(write=False)
        self.bits = arr

    @classmethod
    def from_bytes(cls, data) -> BitSequence:
        """Most-significant bit first, 8 bits per byte."""
        return cls(np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8)))

    @classmethod
    def from_string(cls, text: str) -> BitSequence:
        text = "".join(text.split())
        if set(text) - {"0", "1"}:
            raise InvalidInputError("bit string may only contain 0 and 1")
        return cls(np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0"))

    @property
    def n(self):
        return int(self.bits.size)

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"BitSequence(n={self.n})"


@dataclass(frozen=True)
class NistResult:
    test_name: str
    p_values: tuple
    parameters: dict = field(default_factory=dict)
    note: str = ""

    def __post_init__(self):
        clipped = tuple(min(1.0, max(0.0, float(p))) for p in self.p_values)
        object.__setattr__(self, "p_values", clipped)

    @property
    def p_value(self):
        return min(self.p_values)

    @property
    def passed(self):
        return self.p_value >= ALPHA

    def to_dict(self):
        return {
            "test": self.test_name,
            "p_values": list(self.p_values),
            "passed": self.passed,
            "parameters": self.parameters,
            "note": self.note,
        }


def _as_bits(s):
    if isinstance(s, BitSequence):
        return s
    if isinstance(s, str):
        return BitSequence.from_string(s)
    if isinstance(s, (bytes, bytearray, memoryview)):
        return BitSequence.from_bytes(s)
    return BitSequence(s)


def _require(name, n, minimum, enforce):
    if enforce and n < minimum:
        raise InvalidInputError(f"{name} needs at least {minimum} bits, got {n}")


def monobit(s, *, enforce_min=True) -> NistResult:
    s = _as_bits(s)
    n = s.n
    _require("monobit", n, MIN_LENGTH["monobit"], enforce_min)
    total = 2 * int(s.bits.sum()) - n
    s_obs = abs(total) / math.sqrt(n)
    return NistResult("Monobit", (erfc(s_obs / math.sqrt(2)),), {"n": n})


def default_block_size(n):
    # NIST: M >= 20, M > 0.01 n, N < 100.
    return max(128, -(-n // 100))


def block_frequency(s, block_size=None, *, enforce_min=True) -> NistResult:
    """Chi-square over per-block proportions of ones.

    ``block_size=None`` uses 128, or ``ceil(n / 100)`` when that is larger so
    the block count stays at or below 100.
    """
    s = _as_bits(s)
    n = s.n
    _require("block_frequency", n, MIN_LENGTH["block_frequency"], enforce_min)
    m = default_block_size(n) if block_size is None else int(block_size)
    if m < 1:
        raise InvalidInputError("block size must be positive")
    n_blocks = n // m
    if n_blocks < 1:
        raise InvalidInputError(f"block size {m} exceeds sequence length {n}")
    blocks = s.bits[: n_blocks * m].reshape(n_blocks, m)
    pi = blocks.sum(axis=1) / m
    chi2 = 4.0 * m * float(((pi - 0.5) ** 2).sum())
    return NistResult(
        "BlockFrequency",
        (igamc(n_blocks / 2, chi2 / 2),),
        {"M": m, "N": n_blocks, "chi2": chi2},
    )


def runs(s, *, enforce_min=True) -> NistResult:
    s = _as_bits(s)
    n = s.n
    _require("runs", n, MIN_LENGTH["runs"], enforce_min)
    pi = float(s.bits.sum()) / n
    tau = 2.0 / math.sqrt(n)
    if abs(pi - 0.5) >= tau:
        return NistResult(
            "Runs", (0.0,), {"n": n, "pi": pi}, note="frequency prerequisite failed"
        )
    v_obs = 1 + int(np.count_nonzero(s.bits[1:] != s.bits[:-1]))
    num = abs(v_obs - 2.0 * n * pi * (1 - pi))
    den = 2.0 * math.sqrt(2.0 * n) * pi * (1 - pi)
    return NistResult("Runs", (erfc(num / den),), {"n": n, "pi": pi, "V": v_obs})


@dataclass(frozen=True)
class LongestRunConfig:
    """Block length M, category count K (K + 1 bins) and bin probabilities."""

    M: int
    K: int
    v_min: int
    pi: tuple

    @property
    def categories(self):
        return tuple(range(self.v_min, self.v_min + self.K + 1))


@lru_cache(maxsize=None)
def _count_longest_run_at_most(m, k):
    """Number of m-bit strings whose longest run of ones is <= k."""
    # counts[j] = strings ending in exactly j trailing ones.
    counts = [1] + [0] * k
    for _ in range(m):
        new = [0] * (k + 1)
        new[0] = sum(counts)
        for j in range(1, k + 1):
            new[j] = counts[j - 1]
        counts = new
    return sum(counts)


@lru_cache(maxsize=None)
def longest_run_probabilities(m, v_min, k):
    """Exact category probabilities: ``<= v_min``, ``v_min+1``, ..., ``>= v_min+k``."""
    total = 2**m
    cdf = [Fraction(_count_longest_run_at_most(m, v_min + i), total) for i in range(k)]
    probs = [cdf[0]] + [cdf[i] - cdf[i - 1] for i in range(1, k)] + [1 - cdf[-1]]
    return tuple(probs)


def longest_run_config(n) -> LongestRunConfig:
    if n < 6272:
        m, k, v_min = 8, 3, 1
    elif n < 750_000:
        m, k, v_min = 128, 5, 4
    else:
        m, k, v_min = 10_000, 6, 10
    return LongestRunConfig(m, k, v_min, tuple(float(p) for p in longest_run_probabilities(m, v_min, k)))


def _longest_runs(blocks):
    cur = np.zeros(blocks.shape[0], dtype=np.int64)
    best = np.zeros_like(cur)
    for col in blocks.T:
        cur = (cur + 1) * col
        np.maximum(best, cur, out=best)
    return best


def longest_run(s, *, enforce_min=True) -> NistResult:
    s = _as_bits(s)
    n = s.n
    _require("longest_run", n, MIN_LENGTH["longest_run"], enforce_min)
    cfg = longest_run_config(n)
    n_blocks = n // cfg.M
    if n_blocks < 1:
        raise InvalidInputError(f"longest run needs at least {cfg.M} bits")
    blocks = s.bits[: n_blocks * cfg.M].reshape(n_blocks, cfg.M).astype(np.int64)
    longest = np.clip(_longest_runs(blocks), cfg.v_min, cfg.v_min + cfg.K)
    nu = np.bincount(longest - cfg.v_min, minlength=cfg.K + 1)
    pi = np.array(cfg.pi)
    chi2 = float(((nu - n_blocks * pi) ** 2 / (n_blocks * pi)).sum())
    return NistResult(
        "LongestRun",
        (igamc(cfg.K / 2, chi2 / 2),),
        {"M": cfg.M, "K": cfg.K, "N": n_blocks, "nu": nu.tolist(), "chi2": chi2},
    )


def spectral_dft(s, *, enforce_min=True) -> NistResult:
    s = _as_bits(s)
    n = s.n
    _require("spectral", n, MIN_LENGTH["spectral"], enforce_min)
    x = 2.0 * s.bits.astype(np.float64) - 1.0
    modulus = np.abs(np.fft.rfft(x)[: n // 2])
    threshold = math.sqrt(math.log(1 / 0.05) * n)
    n0 = 0.95 * n / 2
    n1 = int(np.count_nonzero(modulus < threshold))
    d = (n1 - n0) / math.sqrt(n * 0.95 * 0.05 / 4)
    return NistResult(
        "Spectral",
        (erfc(abs(d) / math.sqrt(2)),),
        {"n": n, "T": threshold, "N0": n0, "N1": n1, "d": d},
    )


def _template_bits(template):
    if isinstance(template, str):
        return BitSequence.from_string(template).bits
    return np.asarray(template, dtype=np.uint8)


def _count_non_overlapping(block, tpl):
    m = tpl.size
    if block.size < m:
        return 0
    hits = np.flatnonzero((sliding_window_view(block, m) == tpl).all(axis=1))
    count, next_free = 0, 0
    for i in hits:
        if i >= next_free:
            count += 1
            next_free = i + m
    return count


def non_overlapping_template(
    s, template=DEFAULT_TEMPLATE, n_blocks=TEMPLATE_BLOCKS, *, enforce_min=True
) -> NistResult:
    s = _as_bits(s)
    tpl = _template_bits(template)
    m = int(tpl.size)
    n = s.n
    if m < 1:
        raise InvalidInputError("template must not be empty")
    _require("non_overlapping_template", n, n_blocks * (m + 1), enforce_min)
    block_len = n // n_blocks
    if block_len < m:
        raise InvalidInputError(
            f"template of {m} bits needs blocks of at least {m} bits"
        )
    blocks = s.bits[: n_blocks * block_len].reshape(n_blocks, block_len)
    w = np.array([_count_non_overlapping(b, tpl) for b in blocks], dtype=np.float64)
    mu = (block_len - m + 1) / 2**m
    var = block_len * (1 / 2**m - (2 * m - 1) / 2 ** (2 * m))
    chi2 = float(((w - mu) ** 2).sum() / var)
    return NistResult(
        "Template",
        (igamc(n_blocks / 2, chi2 / 2),),
        {
            "template": "".join(map(str, tpl.tolist())),
            "m": m,
            "N": n_blocks,
            "M": block_len,
            "W": w.astype(int).tolist(),
            "mu": mu,
            "sigma2": var,
            "chi2": chi2,
        },
    )


def pattern_counts(bits, m):
    """Overlapping m-bit pattern counts with wraparound, indexed by pattern value."""
    if m <= 0:
        return np.zeros(1, dtype=np.int64)
    ext = np.concatenate([bits, bits[: m - 1]]).astype(np.int64)
    n = bits.size
    vals = np.zeros(n, dtype=np.int64)
    for k in range(m):
        vals = (vals << 1) | ext[k : k + n]
    return np.bincount(vals, minlength=2**m)


def _psi2(bits, m):
    if m <= 0:
        return 0.0
    n = bits.size
    nu = pattern_counts(bits, m).astype(np.float64)
    return float(2**m / n * (nu * nu).sum() - n)


def serial(s, m=2, *, enforce_min=True) -> NistResult:
    s = _as_bits(s)
    n = s.n
    if m < 2:
        raise InvalidInputError("serial test needs m >= 2")
    # NIST: m < floor(log2 n) - 2.
    _require("serial", n, 2 ** (m + 3), enforce_min)
    p0, p1, p2 = (_psi2(s.bits, m - i) for i in range(3))
    d1 = max(0.0, p0 - p1)
    d2 = max(0.0, p0 - 2 * p1 + p2)
    return NistResult(
        "Serial",
        (igamc(2 ** (m - 2), d1 / 2), igamc(2 ** (m - 3), d2 / 2)),
        {"m": m, "n": n, "psi2": [p0, p1, p2], "del1": d1, "del2": d2},
    )


TEST_ORDER = ("Monobit", "BlockFrequency", "Runs", "LongestRun", "Spectral", "Template", "Serial")


@dataclass(frozen=True)
class NistReport:
    results: tuple

    @property
    def passed_count(self):
        return sum(r.passed for r in self.results)

    @property
    def summary(self):
        return f"Tests Passed {self.passed_count}/{len(self.results)}"

    def by_name(self, name):
        for r in self.results:
            if r.test_name == name:
                return r
        raise KeyError(name)

    def to_dict(self):
        return {
            "results": [r.to_dict() for r in self.results],
            "passed": self.passed_count,
            "total": len(self.results),
        }

    def format_table(self):
        lines = [f"{'Test':<16}{'p-value(s)':<28}Result"]
        for r in self.results:
            ps = ", ".join(f"{p:.6f}" for p in r.p_values)
            verdict = "Pass" if r.passed else "Fail"
            if r.note:
                verdict += f" ({r.note})"
            lines.append(f"{r.test_name:<16}{ps:<28}{verdict}")
        lines.append(self.summary)
        return "\n".join(lines) + "\n"


def run_suite(data, *, template=DEFAULT_TEMPLATE, block_size=None, serial_m=2) -> NistReport:
    s = _as_bits(data)
    return NistReport(
        (
            monobit(s),
            block_frequency(s, block_size),
            runs(s),
            longest_run(s),
            spectral_dft(s),
            non_overlapping_template(s, template),
            serial(s, serial_m),
        )
    )
