"""Discrete chaotic maps with 8-bit quantized output.

Four map families feed the key-derivation entropy pool: logistic, degree-5
Chebyshev, tent (mu = 2) and Henon (a = 1.4, b = 0.3). Logistic, Chebyshev
and tent run on a single byte of state; Henon iterates in double precision
and only its output is quantized.

Every ``*_step`` function mutates its state in place, increments the
iteration counter and returns the new output byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._secret import SecretBytes

__all__ = [
    "ANTI_DEGENERACY_OFFSET",
    "BURN_IN",
    "SEGMENT_BYTES",
    "ChebyshevState",
    "HenonState",
    "LogisticState",
    "MapSeedSet",
    "PreKey",
    "TentState",
    "build_pre_key",
    "chebyshev_build_lut",
    "chebyshev_step",
    "generate_stream",
    "henon_batch_orbit",
    "henon_step",
    "logistic_step",
    "states_from_seeds",
    "tent_step",
]

# 0x9E, from the golden ratio (0x9E3779B9...).
ANTI_DEGENERACY_OFFSET = 158
R_FIXED_MIN = 914  # floor(256 * 3.57)
R_FIXED_MAX = 1023  # floor(256 * 4.0) - 1
SEGMENT_BYTES = 32
BURN_IN = 100

HENON_A = 1.4
HENON_B = 0.3
HENON_BOUND = 10.0


def _escape_fixed_point(new, old, counter):
    if new == old:
        return (new + ANTI_DEGENERACY_OFFSET + counter) % 256
    return new


@dataclass
class LogisticState:
    x: int
    r_fixed: int
    counter: int = 0

    def __post_init__(self):
        if not 0 <= self.x <= 255:
            raise ValueError(f"x must be a byte, got {self.x}")
        if not R_FIXED_MIN <= self.r_fixed <= R_FIXED_MAX:
            raise ValueError(
                f"r_fixed must lie in [{R_FIXED_MIN}, {R_FIXED_MAX}], got {self.r_fixed}"
            )

    def step(self):
        return logistic_step(self)


def logistic_step(s: LogisticState) -> int:
    """One fixed-point logistic iteration.

    ``x' = floor(r_fixed * x * (256 - x) / 256) mod 256``, evaluated in
    exact integers. If the result equals ``x`` the state is pushed off the
    fixed point by ``(158 + counter) mod 256``.
    """
    raw = (s.r_fixed * s.x * (256 - s.x)) // 256 % 256
    s.x = _escape_fixed_point(raw, s.x, s.counter)
    s.counter += 1
    return s.x


def _dequantize_signed(i):
    # Midpoints avoid the endpoints +-1, which are fixed points of T5.
    return (2 * i + 1) / 256 - 1


def _quantize_signed(v):
    return min(255, max(0, math.floor((v + 1) / 2 * 256)))


def chebyshev_build_lut() -> tuple[int, ...]:
    """Byte table of ``cos(5 * arccos(u))`` over the 256 midpoint-quantized inputs."""
    return tuple(
        _quantize_signed(math.cos(5 * math.acos(_dequantize_signed(i))))
        for i in range(256)
    )


CHEBYSHEV_LUT = chebyshev_build_lut()


@dataclass
class ChebyshevState:
    x: int
    counter: int = 0
    lut: tuple = field(default=CHEBYSHEV_LUT, repr=False, compare=False)

    def __post_init__(self):
        if not 0 <= self.x <= 255:
            raise ValueError(f"x must be a byte, got {self.x}")

    def step(self):
        return chebyshev_step(self)


def chebyshev_step(s: ChebyshevState) -> int:
    # XOR with the counter breaks the short cycles any 256-state map falls into.
    s.x = s.lut[s.x] ^ (s.counter % 256)
    s.counter += 1
    return s.x


@dataclass
class TentState:
    x: int
    counter: int = 0

    MU = 2

    def __post_init__(self):
        if not 0 <= self.x <= 255:
            raise ValueError(f"x must be a byte, got {self.x}")

    def step(self):
        return tent_step(self)


def tent_step(s: TentState) -> int:
    bit = s.counter & 1
    if s.x < 128:
        raw = 2 * s.x + bit
    else:
        raw = 2 * (255 - s.x) + bit
    s.x = _escape_fixed_point(raw, s.x, s.counter)
    s.counter += 1
    return s.x


@dataclass
class HenonState:
    x: float
    y: float
    counter: int = 0
    a: float = field(default=HENON_A, init=False)
    b: float = field(default=HENON_B, init=False)

    def step(self):
        return henon_step(self)


def _henon_reset_x(counter):
    return ((counter * 37) % 256) / 256 - 0.5


def _henon_byte(x):
    return min(255, max(0, math.floor((x + 1.5) / 3.0 * 256)))


def henon_step(s: HenonState) -> int:
    """One Henon iteration with a divergence guard.

    If the new ``x`` leaves ``[-10, 10]`` the orbit is reset to a
    counter-derived point in ``[-0.5, 0.5]`` with ``y = 0``. The output byte
    maps ``x`` in ``[-1.5, 1.5]`` linearly onto 0..255.
    """
    x = s.y + 1.0 - s.a * s.x * s.x
    y = s.b * s.x
    if abs(x) > HENON_BOUND:
        x, y = _henon_reset_x(s.counter), 0.0
    s.x, s.y = x, y
    s.counter += 1
    return _henon_byte(x)


def henon_batch_orbit(x0, y0, n_steps, counter=0):
    """Iterate many Henon orbits in lockstep with numpy.

    Applies exactly the arithmetic of :func:`henon_step` element-wise and
    returns ``(x, y, max_abs_x, max_abs_y)`` where the maxima are taken over
    every post-step state of every orbit.
    """
    x = np.array(x0, dtype=np.float64)
    y = np.array(y0, dtype=np.float64)
    max_x = np.zeros_like(x)
    max_y = np.zeros_like(y)
    for c in range(counter, counter + n_steps):
        nx = y + 1.0 - HENON_A * x * x
        y = HENON_B * x
        bad = np.abs(nx) > HENON_BOUND
        if bad.any():
            nx[bad] = _henon_reset_x(c)
            y[bad] = 0.0
        x = nx
        np.maximum(max_x, np.abs(x), out=max_x)
        np.maximum(max_y, np.abs(y), out=max_y)
    return x, y, max_x, max_y


def generate_stream(state, n_bytes: int, burn_in: int = 0) -> bytes:
    """Run ``burn_in`` discarded iterations, then collect ``n_bytes`` outputs."""
    if n_bytes < 1:
        raise ValueError("n_bytes must be >= 1")
    if burn_in < 0:
        raise ValueError("burn_in must be >= 0")
    step = state.step
    for _ in range(burn_in):
        step()
    return bytes(step() for _ in range(n_bytes))


class MapSeedSet:
    """Four 32-byte seeds, one per map family."""

    def __init__(self, logistic, chebyshev, tent, henon):
        self._seeds = [_Seed(s) for s in (logistic, chebyshev, tent, henon)]

    seed_logistic = property(lambda self: bytes(self._seeds[0]))
    seed_chebyshev = property(lambda self: bytes(self._seeds[1]))
    seed_tent = property(lambda self: bytes(self._seeds[2]))
    seed_henon = property(lambda self: bytes(self._seeds[3]))

    def __iter__(self):
        return (bytes(s) for s in self._seeds)

    def __eq__(self, other):
        if not isinstance(other, MapSeedSet):
            return NotImplemented
        return self._seeds == other._seeds

    def __repr__(self):
        return "<MapSeedSet [4 x 32 bytes redacted]>"

    def wipe(self):
        for s in self._seeds:
            s.wipe()


class _Seed(SecretBytes):
    size = 32


class PreKey(SecretBytes):
    """The 128-byte concatenation K1 || K2 || K3 || K4."""

    size = 4 * SEGMENT_BYTES

    def segment(self, i):
        return bytes(self._buf[i * SEGMENT_BYTES : (i + 1) * SEGMENT_BYTES])


def states_from_seeds(seeds: MapSeedSet):
    """Initial map states in the fixed order logistic, Chebyshev, tent, Henon.

    Byte 2 of every seed sets the starting iteration counter. Without it the
    counter-driven perturbations are identical for all seeds and the
    Chebyshev and tent orbits collapse onto a handful of trajectories.
    """
    sl, sc, st, sh = seeds
    return (
        LogisticState(x=sl[0] or 1, r_fixed=R_FIXED_MIN + sl[1] % 110, counter=sl[2]),
        ChebyshevState(x=sc[0], counter=sc[2]),
        TentState(x=st[0] or 1, counter=st[2]),
        HenonState(x=sh[0] / 255 - 0.5, y=sh[1] / 255 * 0.5 - 0.25, counter=sh[2]),
    )


def build_pre_key(
    seeds: MapSeedSet, n_bytes: int = SEGMENT_BYTES, burn_in: int = BURN_IN
) -> PreKey:
    if n_bytes != SEGMENT_BYTES:
        raise ValueError(f"pre-key segments are fixed at {SEGMENT_BYTES} bytes")
    return PreKey(
        b"".join(generate_stream(s, n_bytes, burn_in) for s in states_from_seeds(seeds))
    )
