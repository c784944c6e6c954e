"""Grover key-search cost model.

The model is deliberately plain: ``iterations = floor(pi/4 * 2^(k/2))`` and
``total T gates = floor(iterations * t_per_oracle * overhead)``, all in exact
arithmetic. The defaults are calibration knobs, not claims about any
particular circuit.

The published per-algorithm figures live in :func:`published_reference_table`
as labelled reference data. They cannot be reproduced by the model (a T
count near 2e9 is far below the 2^128 Grover iterations alone), so the two
are never mixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

import mpmath

from .errors import InvalidInputError

DEFAULT_T_PER_ORACLE = 2_100_000_000
MAX_KEY_BITS = 1024


@dataclass(frozen=True)
class GroverParams:
    key_bits: int
    t_per_oracle: int = DEFAULT_T_PER_ORACLE
    error_correction_overhead: Fraction | float | int = 1

    def __post_init__(self):
        if not isinstance(self.key_bits, int) or not 1 <= self.key_bits <= MAX_KEY_BITS:
            raise InvalidInputError(f"key_bits must be an integer in [1, {MAX_KEY_BITS}]")
        if not isinstance(self.t_per_oracle, int) or self.t_per_oracle < 1:
            raise InvalidInputError("t_per_oracle must be a positive integer")
        if _exact(self.error_correction_overhead) < 1:
            raise InvalidInputError("error_correction_overhead must be >= 1")


def _exact(x) -> Fraction:
    # Floats go through their shortest repr so 1.1 means 11/10.
    if isinstance(x, float):
        if not math.isfinite(x):
            raise InvalidInputError("overhead must be finite")
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class GroverEstimate:
    params: GroverParams
    iterations: int
    effective_keyspace_bits: float
    total_t_gates: int

    @property
    def log2_total_t_gates(self):
        return math.log2(self.total_t_gates)

    def to_dict(self):
        return {
            "key_bits": self.params.key_bits,
            "t_per_oracle": self.params.t_per_oracle,
            "error_correction_overhead": str(_exact(self.params.error_correction_overhead)),
            "iterations": str(self.iterations),
            "effective_keyspace_bits": self.effective_keyspace_bits,
            "total_t_gates": str(self.total_t_gates),
            "log2_total_t_gates": self.log2_total_t_gates,
        }


def grover_iterations(k: int) -> int:
    """``floor(pi/4 * 2^(k/2))`` exactly."""
    # 128 guard bits beyond the integer part.
    with mpmath.workprec(k + 160):
        v = mpmath.pi / 4 * mpmath.power(2, mpmath.mpf(k) / 2)
        return int(mpmath.floor(v))


def estimate(p: GroverParams) -> GroverEstimate:
    it = grover_iterations(p.key_bits)
    total = it * p.t_per_oracle * _exact(p.error_correction_overhead)
    return GroverEstimate(
        params=p,
        iterations=it,
        effective_keyspace_bits=p.key_bits / 2,
        total_t_gates=math.floor(total),
    )


@dataclass(frozen=True)
class ReferenceRow:
    """One published row; ``*_text`` keep the printed mantissa/exponent form."""

    algorithm: str
    t_gate_text: str
    speedup_text: str

    @property
    def t_gate_count(self) -> Decimal:
        return _parse_sci(self.t_gate_text)

    @property
    def grover_speedup_estimate(self) -> Decimal:
        return _parse_sci(self.speedup_text)

    def to_dict(self):
        return {
            "algorithm": self.algorithm,
            "t_gate_count": self.t_gate_text,
            "grover_speedup_estimate": self.speedup_text,
        }


def _parse_sci(text):
    mantissa, exp = text.split(" x 10^")
    return Decimal(mantissa).scaleb(int(exp))


_REFERENCE = (
    ReferenceRow("CryptoChaos", "2.10 x 10^9", "3.09 x 10^37"),
    ReferenceRow("AES-GCM", "1.78 x 10^9", "3.09 x 10^37"),
    ReferenceRow("ChaCha20", "1.45 x 10^9", "3.09 x 10^37"),
    ReferenceRow("Blowfish", "0.95 x 10^9", "1.68 x 10^18"),
    ReferenceRow("CAST5", "0.89 x 10^9", "1.68 x 10^18"),
)


def published_reference_table():
    """Published quantum resource figures, verbatim. Reference data only."""
    return _REFERENCE


def format_report(est: GroverEstimate) -> str:
    p = est.params
    lines = [
        "Parametric Grover model",
        f"  key bits                 {p.key_bits}",
        f"  effective keyspace       2^{est.effective_keyspace_bits:g}",
        f"  Grover iterations        {est.iterations:.6e}",
        f"  T gates per oracle       {p.t_per_oracle}",
        f"  error-correction factor  {_exact(p.error_correction_overhead)}",
        f"  total T gates            {est.total_t_gates:.6e} (2^{est.log2_total_t_gates:.2f})",
        "",
        "Published reference figures (not model output)",
        f"  {'Algorithm':<12}{'T Gate Count':>14}{'Grover Speedup Estimate':>26}",
    ]
    for row in published_reference_table():
        lines.append(
            f"  {row.algorithm:<12}{row.t_gate_text:>14}{row.speedup_text:>26}"
        )
    return "\n".join(lines) + "\n"
