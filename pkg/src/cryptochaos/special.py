"""Regularized incomplete gamma functions.

Power series for the lower function and a continued fraction for the upper
one, switching on ``x < a`` as in the Cephes routines that NIST's reference
code uses. ``erfc`` comes straight from :mod:`math`.
"""

import math

from .errors import InvalidInputError

EPS = 1e-15
_BIG = 4503599627370496.0
_BIGINV = 2.22044604925031308085e-16
_MAXLOG = 709.782712893384
_MAXITER = 100_000


def _prefactor(a, x):
    ax = a * math.log(x) - x - math.lgamma(a)
    if ax < -_MAXLOG:
        return 0.0
    return math.exp(ax)


def igam(a: float, x: float) -> float:
    """Regularized lower incomplete gamma ``P(a, x)``."""
    if a <= 0 or x < 0:
        raise InvalidInputError(f"igam domain error: a={a}, x={x}")
    if x == 0:
        return 0.0
    if x > 1 and x > a:
        return 1.0 - igamc(a, x)
    ax = _prefactor(a, x)
    if ax == 0.0:
        return 0.0
    r, c, ans = a, 1.0, 1.0
    for _ in range(_MAXITER):
        r += 1.0
        c *= x / r
        ans += c
        if c <= ans * EPS:
            break
    return ans * ax / a


def igamc(a: float, x: float) -> float:
    """Regularized upper incomplete gamma ``Q(a, x) = 1 - P(a, x)``."""
    if a <= 0 or x < 0:
        raise InvalidInputError(f"igamc domain error: a={a}, x={x}")
    if x == 0:
        return 1.0
    if x < 1 or x < a:
        return 1.0 - igam(a, x)
    ax = _prefactor(a, x)
    if ax == 0.0:
        return 0.0
    y = 1.0 - a
    z = x + y + 1.0
    c = 0.0
    pkm2, qkm2 = 1.0, x
    pkm1, qkm1 = x + 1.0, z * x
    ans = pkm1 / qkm1
    for _ in range(_MAXITER):
        c += 1.0
        y += 1.0
        z += 2.0
        yc = y * c
        pk = pkm1 * z - pkm2 * yc
        qk = qkm1 * z - qkm2 * yc
        if qk != 0:
            r = pk / qk
            t = abs((ans - r) / r)
            ans = r
        else:
            t = 1.0
        pkm2, pkm1 = pkm1, pk
        qkm2, qkm1 = qkm1, qk
        if abs(pk) > _BIG:
            pkm2 *= _BIGINV
            pkm1 *= _BIGINV
            qkm2 *= _BIGINV
            qkm1 *= _BIGINV
        if t <= EPS:
            break
    return ans * ax


erfc = math.erfc
