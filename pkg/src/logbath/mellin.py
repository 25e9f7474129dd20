"""Mellin transforms of the spectral density and vertical-line diagnostics.

The long-time laws come from the poles of

    Xi1_hat(s) = cos(pi s / 2) Gamma(s) Omega_T_hat(1 - s)
    Xi2_hat(s) = sin(pi s / 2) Gamma(s) Omega_hat(1 - s)

and the inversion contour can only be moved if these decay along vertical
lines.  This module evaluates the transforms (closed form where one exists,
quadrature otherwise), fits the decay rate along a line, and probes residues.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from .errors import DomainError, OutOfStripError, ToleranceError
from .quad import DEFAULT_CONFIG, QuadConfig, coth
from .sd import INT_LOG, TABULATED, SpectralDensity, leading_power
from .specfun import gamma_complex

DECLARED_UNVERIFIED = "declared, unverified"
NOISE_FLOOR = 1e-11
_SLOW_FREQ = 1e-2


def _is_pole(z: complex) -> bool:
    return abs(z.imag) < 1e-14 and z.real <= 0 and abs(z.real - round(z.real)) < 1e-12


def mellin_closed_form(sd: SpectralDensity, s: complex) -> complex:
    """q Gamma(s + alpha) l^{-(s + alpha)}, the transform of q nu^alpha e^{-l nu}.

    Being meromorphic, the formula is also the continuation of the transform
    to the left of its strip.
    """
    if sd.kind != INT_LOG or sd.logpow != 0:
        raise DomainError("closed form exists only for the integer-log family with n = 0")
    z = complex(s) + sd.alpha
    if _is_pole(z):
        raise DomainError(f"s + alpha = {z.real:g} is a pole of Gamma")
    return sd.q * gamma_complex(z) * np.exp(-z * math.log(sd.l))


def strip_lower(sd: SpectralDensity, T: float) -> float:
    """Left edge of the convergence strip in Re s."""
    a0 = leading_power(sd)
    return (1.0 - a0) if T > 0 else -a0


def mellin_numeric(sd: SpectralDensity, T: float, s: complex, cfg: QuadConfig = DEFAULT_CONFIG) -> complex:
    """int_0^inf nu^{s-1} Omega(nu) [coth(nu / 2 theta)] dnu by quadrature.

    With nu = e^u the kernel becomes e^{sigma u} e^{i t u}: the half u < 0 is a
    Fourier integral over a semi-infinite range (QUADPACK QAWF), the half
    u > 0 a finite oscillatory one (QAWO), cut where the exponential tail of
    Omega is below underflow.
    """
    s = complex(s)
    if T < 0:
        raise DomainError("temperature must be >= 0")
    lo = strip_lower(sd, T)
    if not s.real > lo:
        raise OutOfStripError(f"Re s = {s.real:g} is outside the strip Re s > {lo:g}")
    thermal = T > 0

    def F(nu):
        if nu <= 0.0:
            return 0.0
        v = sd.scalar(nu)
        return v * coth(nu / (2.0 * T)) if thermal else v

    sigma, t = s.real, s.imag
    sgn = 1.0 if t >= 0 else -1.0
    w = abs(t)
    eps = dict(epsabs=cfg.abs_tol * 1e-4, epsrel=cfg.rel_tol * 1e-2)

    if sd.kind == TABULATED:
        # ramp below the first node, then node to node (the interpolant has kinks there)
        nodes = np.log(sd.table[0])
        u0, pieces = float(nodes[0]), list(zip(nodes[:-1], nodes[1:]))
    else:
        # beyond u_max the exponential factor is below 1e-30 of the peak
        grow = abs(sigma) + sd.alpha + abs(sd.logpow) + (1.0 if thermal else 0.0)
        u_max = math.log(max(2.0, (70.0 + 2.0 * grow * math.log(70.0 / sd.l + math.e)) / sd.l))
        u0, pieces = 0.0, [(0.0, u_max)]

    def lower(v):
        return math.exp(-sigma * v) * F(math.exp(u0 - v))

    def upper(u):
        return math.exp(sigma * u) * F(math.exp(u))

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        # int_{-inf}^{u0} e^{s u} F du = e^{s u0} int_0^inf e^{-sigma v} F(e^{u0 - v}) e^{-i t v} dv
        if w < _SLOW_FREQ:
            # QAWF cycles have length pi / t and go wrong (or crash) for small t; the
            # integrand decays exponentially, so plain adaptive quadrature is safe here
            c_lo, e1 = integrate.quad(lambda v: lower(v) * math.cos(w * v), 0.0, math.inf, limit=cfg.quad_limit, **eps)
            s_lo, e2 = integrate.quad(lambda v: lower(v) * math.sin(w * v), 0.0, math.inf, limit=cfg.quad_limit, **eps)
        else:
            c_lo, e1 = _qawf(lower, "cos", w, eps["epsabs"])
            s_lo, e2 = _qawf(lower, "sin", w, eps["epsabs"])
        low = complex(c_lo, -s_lo) * np.exp(complex(sigma, w) * u0)
        re_up = im_up = e3 = e4 = 0.0
        for a, b in pieces:
            if w < _SLOW_FREQ:
                v, e = integrate.quad(lambda u: upper(u) * math.cos(w * u), a, b, limit=cfg.quad_limit, **eps)
                re_up, e3 = re_up + v, e3 + e
                v, e = integrate.quad(lambda u: upper(u) * math.sin(w * u), a, b, limit=cfg.quad_limit, **eps)
                im_up, e4 = im_up + v, e4 + e
            else:
                v, e = integrate.quad(upper, a, b, weight="cos", wvar=w, limit=cfg.quad_limit, **eps)
                re_up, e3 = re_up + v, e3 + e
                v, e = integrate.quad(upper, a, b, weight="sin", wvar=w, limit=cfg.quad_limit, **eps)
                im_up, e4 = im_up + v, e4 + e
    re_lo, im_lo = low.real, low.imag
    value = complex(re_lo + re_up, sgn * (im_lo + im_up))
    err = e1 + e2 + e3 + e4
    if not cfg.accepts(abs(value), err):
        raise ToleranceError(f"Mellin transform at s={s} did not reach tolerance (err={err:.3g})", value, err)
    return value


def _qawf(f, weight, w, epsabs):
    # QAWF occasionally returns DBL_MAX with a tiny error estimate when the
    # requested absolute tolerance is near round-off; back off and retry.
    tol = max(epsabs, 1e-13)
    while True:
        val, err = integrate.quad(f, 0.0, math.inf, weight=weight, wvar=w, limlst=200, epsabs=tol)
        if abs(val) < 1e300 or tol > 1e-6:
            return val, err
        tol *= 10.0


def omega_hat(sd: SpectralDensity, T: float, s: complex, cfg: QuadConfig = DEFAULT_CONFIG) -> complex:
    """Omega_hat(s) (T = 0) or Omega_T_hat(s): closed form for n = 0 at T = 0, else quadrature."""
    if T == 0 and sd.kind == INT_LOG and sd.logpow == 0:
        return mellin_closed_form(sd, s)
    return mellin_numeric(sd, T, s, cfg)


def xi_hat(sd: SpectralDensity, T: float, s: complex, cfg: QuadConfig = DEFAULT_CONFIG) -> Tuple[complex, complex]:
    """(cos(pi s/2) Gamma(s) Omega_T_hat(1 - s), sin(pi s/2) Gamma(s) Omega_hat(1 - s))."""
    s = complex(s)
    if _is_pole(s):
        raise DomainError(f"s = {s.real:g} is a pole of Gamma")
    g = gamma_complex(s)
    c = np.cos(math.pi * s / 2.0)
    sn = np.sin(math.pi * s / 2.0)
    x1 = c * g * omega_hat(sd, T, 1.0 - s, cfg)
    x2 = sn * g * omega_hat(sd, 0.0, 1.0 - s, cfg)
    return complex(x1), complex(x2)


def gamma_line_ratio(s: complex) -> float:
    """|cos(pi s/2) Gamma(s)| / (sqrt(pi/2) |Im s|^{Re s - 1/2}); tends to 1 as |Im s| grows."""
    s = complex(s)
    if s.imag == 0:
        raise DomainError("the vertical-line asymptotic needs Im s != 0")
    num = abs(np.cos(math.pi * s / 2.0) * gamma_complex(s))
    return float(num / (math.sqrt(math.pi / 2.0) * abs(s.imag) ** (s.real - 0.5)))


# -- decay fits -----------------------------------------------------------------------


@dataclass(frozen=True)
class MellinProfile:
    line_re: float
    im_grid: np.ndarray
    values: np.ndarray
    fitted_zeta: float
    strip: Tuple[float, float]
    threshold: float
    passed: bool
    samples_used: int
    flag: str = ""

    def summary(self) -> str:
        lines = [
            f"zeta = {self.fitted_zeta:.17g}",
            f"threshold = {self.threshold:.17g}",
            f"pass = {'true' if self.passed else 'false'}",
            f"samples_used = {self.samples_used}",
        ]
        if self.flag:
            lines.append(f"flag = {self.flag}")
        return "\n".join(lines) + "\n"


def decay_fit(sd: SpectralDensity, T: float, line_re: float, im_range: Tuple[float, float] = (10.0, 80.0),
              samples: int = 16, delta: float = 0.0, cfg: QuadConfig = DEFAULT_CONFIG) -> MellinProfile:
    """Fit |Omega_T_hat(1 - s)| ~ |Im s|^{-zeta} along Re s = line_re.

    The verdict compares zeta with 1/2 + delta (delta = 0 for the short-time
    strips).  Quadrature samples that fall below the accuracy floor are
    dropped; if fewer than two survive the decay is reported as infinite
    (faster than any power over the sampled range).
    """
    if samples < 8:
        raise DomainError("decay_fit needs at least 8 samples")
    lo, hi = im_range
    if not 0 < lo < hi:
        raise DomainError("im_range must satisfy 0 < lo < hi")
    strip = (-math.inf, 1.0 - strip_lower(sd, T))
    if not line_re < strip[1]:
        raise OutOfStripError(f"Re s = {line_re:g} puts 1 - s outside the strip (need Re s < {strip[1]:g})")
    grid = np.geomspace(lo, hi, samples)
    vals = np.full(samples, np.nan + 0j)
    for k, t in enumerate(grid):
        try:
            vals[k] = omega_hat(sd, T, complex(1.0 - line_re, -t), cfg)
        except ToleranceError:
            pass
    mag = np.abs(vals)
    ok = np.isfinite(mag) & (mag > 0)
    if not (T == 0 and sd.kind == INT_LOG and sd.logpow == 0):
        # quadrature cannot resolve values below round-off of the integral of |integrand|
        floor = NOISE_FLOOR * abs(mellin_numeric(sd, T, complex(1.0 - line_re, 0.0), cfg))
        ok &= mag > floor
    threshold = 0.5 + delta
    if ok.sum() >= 2:
        slope, _ = np.polyfit(np.log(grid[ok]), np.log(mag[ok]), 1)
        zeta = float(-slope)
    else:
        zeta = math.inf
    flag = DECLARED_UNVERIFIED if sd.kind == TABULATED else ""
    return MellinProfile(line_re, grid, vals, zeta, strip, threshold, bool(zeta > threshold), int(ok.sum()), flag)


def pole_residue(sd: SpectralDensity, s0: float, component: str = "xi2", eps: float = 1e-5) -> complex:
    """Residue of Xi_hat at a real point s0, from the symmetric limit of (s - s0) Xi_hat(s).

    Uses the closed-form continuation, so only the n = 0 integer-log family at
    T = 0 is supported.  A simple pole at s0 contributes -residue * tau^{-s0}
    to the large-tau behaviour.
    """
    if sd.kind != INT_LOG or sd.logpow != 0:
        raise DomainError("residue probe needs the closed-form continuation (integer-log, n = 0)")
    idx = 0 if component == "xi1" else 1
    up = xi_hat(sd, 0.0, s0 + eps)[idx] * eps
    dn = xi_hat(sd, 0.0, s0 - eps)[idx] * (-eps)
    return 0.5 * (up + dn)


def profile_rows(profile: MellinProfile):
    """Rows (re_s, im_s, re_val, im_val, abs_val) for CSV output."""
    for t, v in zip(profile.im_grid, profile.values):
        yield (profile.line_re, float(t), v.real, v.imag, abs(v))
