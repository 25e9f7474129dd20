"""Direct quadrature of the bath correlation function and its moments.

Xi_1(tau) = int_0^inf Omega_T(nu) cos(nu tau) dnu,   Omega_T = Omega coth(nu / 2 theta)
Xi_2(tau) = int_0^inf Omega(nu)   sin(nu tau) dnu

The range is cut at nu_c (default 1, where |ln nu|^n has its kink for odd n).
Below nu_c the piece (0, a] with a = min(nu_c, pi / tau) holds less than half
an oscillation and is integrated after nu = a exp(-u), which turns the
nu^alpha (-ln nu)^n endpoint into an exponentially decaying tail; (a, nu_c] is
oscillatory and goes to QUADPACK's QAWO rule.  Above nu_c a double-exponential
Fourier rule (Ooura-Mori) handles arbitrarily many oscillations.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import partial
from typing import Iterable, List

import numpy as np
from scipy import integrate

from ._parallel import ordered_map
from .errors import DivergenceError, DomainError, TauRangeError, ToleranceError, UnsupportedKindError
from .sd import INT_LOG, TABULATED, SpectralDensity, leading_power

_COTH_SERIES_BELOW = 1e-3


@dataclass(frozen=True)
class QuadConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    tau_max_direct: float = 1e4
    split_point: float = 1.0
    max_levels: int = 10
    quad_limit: int = 4000

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be > 0")
        if not self.tau_max_direct > 0:
            raise DomainError("tau_max_direct must be > 0")
        if not self.split_point > 0:
            raise DomainError("split_point must be > 0")

    def accepts(self, value: float, err: float) -> bool:
        return err <= max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_CONFIG = QuadConfig()


@dataclass(frozen=True)
class BcfSample:
    """One time point in dimensionless units: xi1 = C_1/omega_s^2, xi2 = C_2/omega_s^2."""

    tau: float
    xi1: float
    xi2: float
    err1: float = 0.0
    err2: float = 0.0

    def physical(self, omega_s: float):
        """(t, C_1, C_2) for a given scale frequency."""
        return self.tau / omega_s, self.xi1 * omega_s**2, self.xi2 * omega_s**2


def coth(x: float) -> float:
    """coth for x > 0; Laurent series below 1e-3 to avoid 1/tanh cancellation."""
    if x < _COTH_SERIES_BELOW:
        x2 = x * x
        return 1.0 / x + x / 3.0 - x * x2 / 45.0
    if x > 20.0:
        return 1.0
    return 1.0 / math.tanh(x)


def coth_array(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    small = x < _COTH_SERIES_BELOW
    xs = np.where(small, x, 1.0)
    xl = np.where(small, 1.0, x)
    series = 1.0 / xs + xs / 3.0 - xs**3 / 45.0
    return np.where(small, series, 1.0 / np.tanh(xl))


def _weighted(sd: SpectralDensity, theta: float, thermal: bool):
    """Scalar and vectorised versions of Omega (or Omega_T)."""
    if thermal and theta > 0:
        two_theta = 2.0 * theta

        def f(nu):
            return sd.scalar(nu) * coth(nu / two_theta) if nu > 0 else 0.0

        def fv(nu):
            nu = np.asarray(nu, dtype=float)
            pos = nu > 0
            out = sd(np.where(pos, nu, 1.0)) * coth_array(np.where(pos, nu, 1.0) / two_theta)
            return np.where(pos, out, 0.0)

        return f, fv
    return sd.scalar, sd


def _check_theta(sd: SpectralDensity, theta: float):
    if theta < 0:
        raise DomainError("temperature must be >= 0")
    if theta > 0 and not leading_power(sd) > 0:
        raise DivergenceError("Omega_T behaves as nu^(alpha_0 - 1) with alpha_0 <= 0: integral diverges")


def _quad(f, a, b, cfg, **kw):
    val, err = integrate.quad(f, a, b, epsabs=cfg.abs_tol * 1e-2, epsrel=cfg.rel_tol * 1e-2,
                              limit=cfg.quad_limit, **kw)
    return val, err


def _head(f, a, tau, wfun, cfg):
    """int_0^a f(nu) w(nu tau) dnu with nu = a exp(-u)."""

    def g(u):
        nu = a * math.exp(-u)
        return nu * f(nu) * wfun(nu * tau)

    return _quad(g, 0.0, math.inf, cfg)


# -- double-exponential Fourier rule --------------------------------------------

_DE_BETA = 0.25


def _de_nodes(h: float, offset: float):
    """Nodes t, phi(t), phi'(t) of the Ooura-Mori transformation for step h."""
    M = math.pi / h
    alpha = _DE_BETA / math.sqrt(1.0 + M * math.log1p(M) / (4.0 * math.pi))
    t_neg = math.log(40.0 / alpha) + 1.0
    t_pos = math.log(40.0 / _DE_BETA) + 1.0
    k = np.arange(math.floor(-t_neg / h), math.ceil(t_pos / h) + 1, dtype=float)
    t = (k - offset) * h
    E = 2.0 * t + alpha * (1.0 - np.exp(-t)) + _DE_BETA * np.expm1(t)
    Ep = 2.0 + alpha * np.exp(-t) + _DE_BETA * np.exp(t)
    D = -np.expm1(-E)
    zero = t == 0.0
    Dz = np.where(zero, 1.0, D)
    phi = np.where(zero, 0.0, t / Dz)
    dphi = np.where(zero, 0.0, (Dz - t * Ep * np.exp(-E)) / Dz**2)
    if np.any(zero):
        e1 = 2.0 + alpha + _DE_BETA
        e2 = _DE_BETA - alpha
        phi = np.where(zero, 1.0 / e1, phi)
        dphi = np.where(zero, (e1 * e1 - e2) / (2.0 * e1 * e1), dphi)
    return M, phi, dphi


def de_fourier(fv, omega: float, kind: str, cfg: QuadConfig = DEFAULT_CONFIG, h0: float = 0.25):
    """int_0^inf f(x) sin(omega x) dx  (kind='sin') or cos (kind='cos'), omega > 0.

    ``fv`` must accept numpy arrays.  Returns (value, error estimate), the
    estimate being the change between the last two step halvings.
    """
    if not omega > 0:
        raise DomainError("DE Fourier rule needs omega > 0")
    offset = 0.0 if kind == "sin" else 0.5
    trig = np.sin if kind == "sin" else np.cos
    prev = None
    h = h0
    for _ in range(cfg.max_levels):
        M, phi, dphi = _de_nodes(h, offset)
        x = M * phi / omega
        vals = fv(x) * trig(M * phi) * dphi
        est = math.pi / omega * float(np.sum(vals))
        if prev is not None:
            err = abs(est - prev)
            if cfg.accepts(est, err * 10.0):
                return est, err
        prev = est
        h /= 2.0
    raise ToleranceError(f"DE Fourier rule did not converge (omega={omega:g})", est, err)


# -- transforms ------------------------------------------------------------------


def _piecewise(f, sd, tau, kind, cfg):
    """Node-to-node quadrature for a tabulated density, which is only
    piecewise smooth (its interpolant has derivative jumps at the nodes)."""
    edges = np.concatenate([[0.0], sd.table[0]])
    total = err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        if kind is not None and tau > 0:
            v, e = _quad(f, lo, hi, cfg, weight=kind, wvar=tau)
        else:
            v, e = _quad(f, lo, hi, cfg)
        total += v
        err += e
    return total, err


def _transform(sd: SpectralDensity, theta: float, tau: float, kind: str, cfg: QuadConfig):
    """int_0^inf F(nu) w(nu tau) dnu with F = Omega_T for cos and Omega for sin."""
    f, fv = _weighted(sd, theta, thermal=(kind == "cos"))
    wfun = math.cos if kind == "cos" else math.sin
    if sd.kind == TABULATED:
        return _piecewise(f, sd, tau, kind, cfg)
    end = sd.support_end
    nu_c = min(cfg.split_point, end)
    a = nu_c if tau <= 0 else min(nu_c, math.pi / tau)
    total, err = _head(f, a, tau, wfun, cfg)
    if a < nu_c:
        v, e = _quad(f, a, nu_c, cfg, weight=kind, wvar=tau)
        total += v
        err += e
    if nu_c < end:
        if math.isinf(end) and tau >= 1.0:
            # int_{nu_c}^inf F e^{i nu tau} = e^{i nu_c tau} int_0^inf F(nu_c + x) e^{i x tau}
            shifted = lambda x: fv(nu_c + x)  # noqa: E731
            c, ec = de_fourier(shifted, tau, "cos", cfg)
            s, es = de_fourier(shifted, tau, "sin", cfg)
            ct, st = math.cos(nu_c * tau), math.sin(nu_c * tau)
            v = ct * c - st * s if kind == "cos" else st * c + ct * s
            e = ec + es
        elif math.isinf(end):
            v, e = _quad(lambda nu: f(nu) * wfun(nu * tau), nu_c, math.inf, cfg)
        else:
            v, e = _quad(f, nu_c, end, cfg, weight=kind, wvar=tau) if tau > 0 else _quad(f, nu_c, end, cfg)
        total += v
        err += e
    return total, err


def moment(sd: SpectralDensity, p: int, T: float, cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """int_0^inf nu^p Omega(nu) coth(nu / 2T) dnu, with coth = 1 for T = 0 or p = 1.

    p = 2 is returned without the factor 1/2 that enters the short-time
    curvature.
    """
    if p not in (0, 1, 2):
        raise DomainError("moment order must be 0, 1 or 2")
    value, err = _raw_moment(sd, p, T, thermal=(p != 1), cfg=cfg)
    if not cfg.accepts(value, err):
        raise ToleranceError(f"moment p={p} did not reach tolerance (err={err:.3g})", value, err)
    return value


def _raw_moment(sd, p, theta, thermal, cfg=DEFAULT_CONFIG):
    _check_theta(sd, theta if thermal else 0.0)
    f, _ = _weighted(sd, theta, thermal)
    g = (lambda nu: nu**p * f(nu)) if p else f
    if sd.kind == TABULATED:
        return _piecewise(g, sd, 0.0, None, cfg)
    end = sd.support_end
    nu_c = min(cfg.split_point, end)
    total, err = _head(g, nu_c, 0.0, lambda x: 1.0, cfg)
    if nu_c < end:
        v, e = _quad(g, nu_c, end, cfg)
        total += v
        err += e
    return total, err


def _sample(tau, sd, theta, cfg):
    if tau == 0.0:
        v, e = _raw_moment(sd, 0, theta, thermal=True, cfg=cfg)
        x1, e1, x2, e2 = v, e, 0.0, 0.0
    else:
        x1, e1 = _transform(sd, theta, tau, "cos", cfg)
        x2, e2 = _transform(sd, theta, tau, "sin", cfg)
    for val, err, name in ((x1, e1, "xi1"), (x2, e2, "xi2")):
        if not cfg.accepts(val, err):
            raise ToleranceError(f"{name} at tau={tau:g}: error estimate {err:.3g} above tolerance", val, err)
    return BcfSample(float(tau), float(x1), float(x2), float(e1), float(e2))


def bcf_numeric(sd: SpectralDensity, T: float, taus: Iterable[float], cfg: QuadConfig = DEFAULT_CONFIG) -> List[BcfSample]:
    """Quadrature of the correlation function on a grid of dimensionless times."""
    taus = [float(t) for t in np.atleast_1d(np.asarray(taus, dtype=float))]
    _check_theta(sd, T)
    for t in taus:
        if t < 0:
            raise DomainError("tau must be >= 0 (Xi_1 is even and Xi_2 odd in tau)")
        if t > cfg.tau_max_direct:
            raise TauRangeError(
                f"tau={t:g} exceeds tau_max_direct={cfg.tau_max_direct:g}; use the asymptotic evaluator (asympt)"
            )
    return ordered_map(partial(_sample, sd=sd, theta=T, cfg=cfg), taus)


# -- contour-rotation oracle -------------------------------------------------------


def fourier_tail_oracle(sd: SpectralDensity, tau: float, full_output: bool = False):
    """int_0^inf Omega(nu) e^{i nu tau} dnu = Xi_1 + i Xi_2 at zero temperature,
    computed on the rotated contour nu = i u.

    Valid for the integer-log family with even n, where (ln nu)^n is analytic
    away from the negative axis.  The rotated integrand decays like e^{-u tau},
    so accuracy improves with tau.
    """
    if sd.kind != INT_LOG or sd.logpow % 2:
        raise UnsupportedKindError("contour rotation needs the integer-log family with even n")
    if not tau > sd.l:
        raise DomainError(f"contour oracle requires tau > l (tau={tau:g}, l={sd.l:g})")
    n, alpha = sd.logpow, sd.alpha
    shift = complex(-math.log(tau), math.pi / 2.0)
    damp = sd.l / tau

    # x = tau u:  tau^{-1-alpha} int x^alpha e^{-x} (ln x - ln tau + i pi/2)^n e^{-i l x / tau} dx
    def z(x):
        return x**alpha * math.exp(-x) * (math.log(x) + shift) ** n * cmath.exp(complex(0.0, -damp * x)) if x > 0 else 0j

    val = 0j
    err = 0.0
    for lo, hi in ((0.0, 1.0), (1.0, math.inf)):
        re, ere = integrate.quad(lambda x: z(x).real, lo, hi, epsabs=1e-15, epsrel=1e-13, limit=500)
        im, eim = integrate.quad(lambda x: z(x).imag, lo, hi, epsabs=1e-15, epsrel=1e-13, limit=500)
        val += complex(re, im)
        err += ere + eim
    scale = sd.q * tau ** (-1.0 - alpha)
    pref = 1j * cmath.exp(1j * math.pi * alpha / 2.0) * scale
    result = pref * val
    if full_output:
        return result, abs(pref) * err
    return result
