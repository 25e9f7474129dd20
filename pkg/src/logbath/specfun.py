"""Gamma-family special functions used by the asymptotic laws and the Mellin
diagnostics.

Gamma uses the Lanczos approximation (g = 7, nine coefficients), evaluated in
log form so that large arguments and large imaginary parts do not overflow.
Digamma and the higher polygammas use upward recurrence followed by the
Bernoulli asymptotic series.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError

_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# B_2, B_4, ..., B_20
_BERNOULLI_EVEN = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
)

EULER_GAMMA = 0.57721566490153286061


def _lanczos_log(z):
    # valid for Re z >= 0.5; works for float or complex z
    z = z - 1.0
    x = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        x = x + _LANCZOS[i] / (z + i)
    t = z + _G + 0.5
    log = cmath.log if isinstance(z, complex) else math.log
    return _HALF_LOG_2PI + (z + 0.5) * log(t) - t + log(x)


def gamma(x: float) -> float:
    """Gamma function for real x > 0."""
    if not x > 0.0:
        raise DomainError(f"gamma requires x > 0, got {x!r}")
    if x < 0.5:
        # Gamma(x) = Gamma(x + 1) / x keeps the Lanczos sum in its accurate region
        return math.exp(_lanczos_log(x + 1.0)) / x
    if x == math.floor(x) and x <= 171:
        return float(math.factorial(int(x) - 1))
    return math.exp(_lanczos_log(x))


def log_gamma_complex(z: complex) -> complex:
    """Principal-branch-free log Gamma for complex z (imaginary part is only
    defined modulo 2*pi, which is all exp() needs)."""
    z = complex(z)
    if z.real < 0.5:
        if z.imag == 0.0 and z.real == math.floor(z.real):
            raise DomainError(f"Gamma has a pole at {z.real:g}")
        # reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        return math.log(math.pi) - cmath.log(cmath.sin(math.pi * z)) - _lanczos_log(1.0 - z)
    return _lanczos_log(z)


def gamma_complex(z: complex) -> complex:
    """Gamma for complex arguments via Lanczos plus reflection."""
    return cmath.exp(log_gamma_complex(z))


def digamma(x: float) -> float:
    """psi(x) for real x > 0."""
    if not x > 0.0:
        raise DomainError(f"digamma requires x > 0, got {x!r}")
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    p = inv2
    for k, b in enumerate(_BERNOULLI_EVEN[:8], start=1):
        series += b / (2 * k) * p
        p *= inv2
    return acc + math.log(x) - 0.5 / x - series


def polygamma(m: int, x: float) -> float:
    """m-th derivative of the digamma function, m >= 0, x > 0."""
    if m < 0:
        raise DomainError("polygamma order must be >= 0")
    if m == 0:
        return digamma(x)
    if not x > 0.0:
        raise DomainError(f"polygamma requires x > 0, got {x!r}")
    sign = -1.0 if m % 2 == 0 else 1.0  # (-1)^(m+1)
    mfact = math.factorial(m)
    acc = 0.0
    xmin = 20.0 + 2.0 * m
    while x < xmin:
        acc += 1.0 / x ** (m + 1)
        x += 1.0
    tail = math.factorial(m - 1) / x**m + mfact / (2.0 * x ** (m + 1))
    for k, b in enumerate(_BERNOULLI_EVEN, start=1):
        term = b * math.factorial(2 * k + m - 1) / (math.factorial(2 * k) * x ** (2 * k + m))
        tail += term
        if abs(term) < 1e-18 * abs(tail):
            break
    return sign * (mfact * acc + tail)


@dataclass(frozen=True)
class SpecialValue:
    gamma: float
    gamma_prime: float
    digamma: float


def gamma_kernel(x: float) -> SpecialValue:
    """Gamma, its first derivative and digamma at a real x > 0."""
    g = gamma(x)
    psi = digamma(x)
    return SpecialValue(gamma=g, gamma_prime=g * psi, digamma=psi)
