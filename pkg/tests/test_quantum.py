import math
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cryptochaos import quantum
from cryptochaos.errors import InvalidInputError
from cryptochaos.quantum import GroverParams, estimate, grover_iterations

# pi to 120 digits, enough to pin floor(pi/4 * 2^(k/2)) for k <= 300.
PI_TEXT = (
    "3.14159265358979323846264338327950288419716939937510"
    "58209749445923078164062862089986280348253421170679"
    "8214808651328230664709384460955058223172535940812848"
)


def iterations_oracle(k):
    getcontext().prec = 200
    pi = Decimal(PI_TEXT)
    lo = pi * Decimal(2) ** (Decimal(k) / 2) / 4
    hi = (pi + Decimal("1e-118")) * Decimal(2) ** (Decimal(k) / 2) / 4
    assert int(lo) == int(hi)
    return int(lo)


@pytest.mark.parametrize("k", [1, 2, 3, 8, 64, 127, 128, 192, 255, 256, 300])
def test_iterations_match_decimal_oracle(k):
    assert grover_iterations(k) == iterations_oracle(k)


def test_small_example():
    e = estimate(GroverParams(2, 1, 1))
    assert e.iterations == 1 and e.total_t_gates == 1


def test_k256_effective_keyspace():
    e = estimate(GroverParams(256))
    assert e.effective_keyspace_bits == 128
    assert e.iterations == iterations_oracle(256)
    assert e.total_t_gates == e.iterations * quantum.DEFAULT_T_PER_ORACLE


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(key_bits=0),
        dict(key_bits=2000),
        dict(key_bits=128, t_per_oracle=0),
        dict(key_bits=128, error_correction_overhead=0.5),
        dict(key_bits=128, error_correction_overhead=float("inf")),
    ],
)
def test_invalid_params(kwargs):
    with pytest.raises(InvalidInputError):
        GroverParams(**kwargs)


def test_overhead_is_exact():
    e = estimate(GroverParams(128, 3, 1.1))
    assert e.total_t_gates == math.floor(grover_iterations(128) * 3 * Fraction(11, 10))


def test_monotone_over_sweep():
    totals = [estimate(GroverParams(k)).total_t_gates for k in (64, 128, 192, 256)]
    assert totals == sorted(totals) and len(set(totals)) == 4


@given(st.integers(2, 600), st.integers(1, 10**6), st.integers(1, 10**6))
def test_monotone_in_every_parameter(k, t, dt):
    base = estimate(GroverParams(k, t))
    assert estimate(GroverParams(k + 1, t)).total_t_gates >= base.total_t_gates
    assert estimate(GroverParams(k, t + dt)).total_t_gates > base.total_t_gates
    assert estimate(GroverParams(k, t, 2)).total_t_gates == 2 * base.total_t_gates


def test_iterations_nondecreasing_and_growing():
    its = [grover_iterations(k) for k in range(1, 80)]
    assert all(a <= b for a, b in zip(its, its[1:]))
    assert all(a < b for a, b in zip(its[1:], its[2:]))


def test_reference_table_verbatim():
    rows = quantum.published_reference_table()
    assert [r.algorithm for r in rows] == ["CryptoChaos", "AES-GCM", "ChaCha20", "Blowfish", "CAST5"]
    table = {r.algorithm: r for r in rows}
    assert table["CryptoChaos"].t_gate_text == "2.10 x 10^9"
    assert table["CryptoChaos"].t_gate_count == Decimal("2.10E9")
    assert table["Blowfish"].speedup_text == "1.68 x 10^18"
    assert table["Blowfish"].grover_speedup_estimate == Decimal("1.68E18")
    assert table["Blowfish"].t_gate_text == "0.95 x 10^9"
    assert table["AES-GCM"].grover_speedup_estimate == Decimal("3.09E37")


def test_reference_not_derivable_from_model():
    # The published T counts are far below even the bare iteration count.
    ref = quantum.published_reference_table()[0].t_gate_count
    assert estimate(GroverParams(256)).iterations > ref * 10**20


def test_report_separates_model_and_reference():
    text = quantum.format_report(estimate(GroverParams(256)))
    model, ref = text.split("Published reference figures")
    assert "2^128" in model and "2.10 x 10^9" not in model
    assert "2.10 x 10^9" in ref and "3.09 x 10^37" in ref
    d = estimate(GroverParams(128)).to_dict()
    assert d["effective_keyspace_bits"] == 64 and int(d["iterations"]) == grover_iterations(128)
