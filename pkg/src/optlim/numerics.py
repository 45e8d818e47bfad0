"""Complex principal logarithm, dilogarithm and Bloch-Wigner function.

All branch choices follow the principal convention arg z in (-pi, pi].
Points on the negative real axis therefore get arg = +pi, and the
dilogarithm on its cut [1, oo) takes the limit from below, which is the
convention that makes D(x) = 0 for every real x.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

PI = math.pi
PI2 = math.pi * math.pi
TWO_PI = 2.0 * math.pi
PI2_OVER_6 = PI2 / 6.0


def _bernoulli_series_coeffs(nmax: int) -> list[float]:
    """Coefficients B_n / (n+1)! of the log-series for Li2, computed exactly."""
    b = [Fraction(1)]
    for m in range(1, nmax + 1):
        acc = Fraction(0)
        binom = 1
        for j in range(m):
            acc += binom * b[j]
            binom = binom * (m + 1 - j) // (j + 1)
        b.append(-acc / (m + 1))
    coeffs = []
    fact = 1
    for n in range(nmax + 1):
        fact *= n + 1
        coeffs.append(float(b[n] / fact))
    return coeffs


# Truncation at n=40 leaves terms below 1e-17 for |u| <= 1.8, the worst
# argument reachable after region reduction.
_LI2_COEFFS = _bernoulli_series_coeffs(40)


def _as_complex(z) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite complex value {z!r}")
    # Collapse -0.0 imaginary parts so the negative real axis maps to arg +pi.
    if z.imag == 0.0:
        z = complex(z.real, 0.0)
    return z


def plog(z) -> complex:
    """Principal logarithm, arg in (-pi, pi]."""
    z = _as_complex(z)
    if z == 0:
        raise ValueError("log of zero")
    return cmath.log(z)


def _li2_power_series(z: complex) -> complex:
    """Direct power series sum z^k / k^2; fast and stable for |z| <= 1/2."""
    total = 0.0 + 0.0j
    zpow = 1.0 + 0.0j
    for k in range(1, 80):
        zpow *= z
        term = zpow / (k * k)
        total += term
        if abs(term) < 1e-18 * (1.0 + abs(total)):
            break
    return total


def _li2_log_series(z: complex) -> complex:
    """Li2 via the Bernoulli log-series; used on the lens 1/2 < |z| <= 1,
    Re z <= 1/2, where the direct series converges too slowly.

    Unsuitable for tiny |z|: forming log(1-z) there cancels catastrophically.
    """
    u = -cmath.log(1.0 - z)
    total = 0.0 + 0.0j
    upow = 1.0 + 0.0j
    for c in _LI2_COEFFS:
        upow *= u
        if c != 0.0:
            term = c * upow
            total += term
            if abs(term) < 1e-18 * (1.0 + abs(total)):
                break
    return total


def li2(z) -> complex:
    """Principal-branch dilogarithm Li2(z) = -int_0^z log(1-t)/t dt.

    Total on finite inputs; Li2(1) = pi^2/6.  Region reduction: inversion
    for |z| > 1, reflection for Re z > 1/2, then the accelerated log-series.
    """
    z = _as_complex(z)
    if z == 0:
        return 0.0 + 0.0j
    if z == 1:
        return complex(PI2_OVER_6, 0.0)

    shift = 0.0 + 0.0j
    sign = 1.0
    if abs(z) > 1.0:
        # Li2(z) = -Li2(1/z) - pi^2/6 - log(-z)^2 / 2
        lg = plog(-z)
        shift += -PI2_OVER_6 - 0.5 * lg * lg
        sign = -sign
        z = 1.0 / z
    if z.real > 0.5:
        # Li2(z) = pi^2/6 - log(z) log(1-z) - Li2(1-z)
        one_minus = _as_complex(1.0 - z)
        if one_minus == 0:
            return shift + sign * PI2_OVER_6
        shift += sign * (PI2_OVER_6 - plog(z) * plog(one_minus))
        sign = -sign
        z = one_minus
    series = _li2_power_series(z) if abs(z) <= 0.5 else _li2_log_series(z)
    return shift + sign * series


def bloch_wigner(z) -> float:
    """Bloch-Wigner function D(z) = Im Li2(z) + log|z| * arg(1-z).

    Real-valued; the hyperbolic volume of the ideal tetrahedron with shape z.
    Undefined at z in {0, 1}.
    """
    z = _as_complex(z)
    if z == 0 or z == 1:
        raise ValueError(f"Bloch-Wigner function undefined at {z}")
    one_minus = _as_complex(1.0 - z)
    return li2(z).imag + math.log(abs(z)) * cmath.phase(one_minus)


def shape_prime(u) -> complex:
    """Companion shape parameter u' = 1/(1-u)."""
    u = complex(u)
    return 1.0 / (1.0 - u)


def shape_double_prime(u) -> complex:
    """Companion shape parameter u'' = 1 - 1/u."""
    u = complex(u)
    return 1.0 - 1.0 / u


def reduce_centered(x: float, modulus: float) -> float:
    """Reduce a real number into the centered interval (-modulus/2, modulus/2]."""
    if modulus <= 0:
        raise ValueError("modulus must be positive")
    return x - modulus * math.ceil(x / modulus - 0.5)
