"""Short- and long-time asymptotics of the correlation function.

Long-time laws.  Writing a = alpha (C_1 at T > 0) or a = 1 + alpha (C_1 at
T = 0 and C_2), a term  c nu^alpha (-ln nu)^n  of the small-nu expansion gives

    c * P[Gamma(a) e^{i pi a / 2}] * tau^{-a} ln^n(tau)        (generic)

with P = Re for C_1 and Im for C_2 (C_1 at T > 0 carries an extra 2 theta from
coth(nu / 2 theta) ~ 2 theta / nu).  When the trigonometric factor vanishes
(odd a - 1 ... see ``_resonant``) the law loses one log power and the
coefficient becomes a factorial; when additionally n = 0 the term drops out
and the next expansion term takes over (cascade).

The evaluator can add, on top of the selected law:

* every lower log order at the same power, from (ln tau - d/de)^n acting on
  Gamma(a + e) e^{i pi (a + e) / 2} (finite for integer n);
* the contributions of all higher expansion terms;
* for odd n, the endpoint-type contribution of the kink of |ln nu|^n at nu = 1,
  which decays like tau^{-1-n} and can dominate the power-log law when alpha
  is large.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, List, Optional

import numpy as np

from .errors import DomainError, ExpansionExhaustedError, PreconditionError
from .quad import BcfSample, _raw_moment, moment
from .sd import (
    FIRST_CLASS,
    INT_LOG,
    SECOND_CLASS,
    ExpansionTerm,
    LowFreqExpansion,
    SpectralDensity,
    low_freq_expansion,
)
from .specfun import _BERNOULLI_EVEN, SpecialValue, gamma, gamma_kernel, polygamma  # noqa: F401

INT_TOL = 1e-9
NEAR_RESONANCE = 1e-6

C1T = "C1T"  # real part, T > 0
C1T0 = "C1T0"  # real part, T = 0
C2 = "C2"  # minus the imaginary part
PARTS = (C1T, C1T0, C2)


class NearResonanceWarning(RuntimeWarning):
    """alpha is within conditioning range of a resonant integer but not equal to it."""


def part_for(component: str, T: float) -> str:
    if component == "xi2":
        return C2
    return C1T if T > 0 else C1T0


def _as_int(x: float) -> Optional[int]:
    k = round(x)
    return int(k) if abs(x - k) < INT_TOL else None


def _cos_half_pi(x: float) -> float:
    k = _as_int(x)
    if k is None:
        return math.cos(math.pi * x / 2.0)
    return (0.0, -1.0, 0.0, 1.0)[(k + 1) % 4] if k % 2 else (1.0, -1.0)[(k // 2) % 2]


def _sin_half_pi(x: float) -> float:
    k = _as_int(x)
    if k is None:
        return math.sin(math.pi * x / 2.0)
    return 0.0 if k % 2 == 0 else (1.0, -1.0)[((k - 1) // 2) % 2]


def _shift(part: str) -> float:
    return 0.0 if part == C1T else 1.0


def _resonant(alpha: float, part: str) -> Optional[int]:
    """The resonance integer (m_0, m_1 or m_2) if alpha sits on one, else None."""
    k = _as_int(alpha)
    if k is None or k < 1:
        return None
    if part == C1T0:
        return k // 2 if k % 2 == 0 else None
    return (k - 1) // 2 if k % 2 == 1 else None


# -- branch data ----------------------------------------------------------------


@dataclass(frozen=True)
class LawTerm:
    """coeff * tau^{-power} * ln(tau)^logpow."""

    power: float
    logpow: float
    coeff: float

    def __call__(self, tau):
        tau = np.asarray(tau, dtype=float)
        return self.coeff * tau ** (-self.power) * np.log(tau) ** self.logpow


@dataclass(frozen=True)
class AsymptoticBranch:
    part: str
    law: str
    used_term_index: int
    power: float
    logpow: float
    prefactor: float
    alpha: float
    term_logpow: float
    cls: str = FIRST_CLASS
    secondary: Optional[LawTerm] = None
    resonance_ints: Optional[tuple] = None

    @property
    def leading(self) -> LawTerm:
        return LawTerm(self.power, self.logpow, self.prefactor)

    def terms(self) -> List[LawTerm]:
        out = [self.leading]
        if self.secondary is not None:
            out.append(self.secondary)
        return out


def law_value(branch: AsymptoticBranch, taus, include_secondary: bool = True):
    """Evaluate the selected law on tau > 1 (ln tau > 0)."""
    taus = np.asarray(taus, dtype=float)
    if np.any(taus <= 1.0):
        raise DomainError("power-log laws need tau > 1")
    terms = branch.terms() if include_secondary else [branch.leading]
    return sum(t(taus) for t in terms)


# -- coefficients -----------------------------------------------------------------


def branch_coefficient(b: AsymptoticBranch, coeff: float, T: float) -> float:
    """Signed prefactor of the leading law, in units of omega_s^2 (so the T > 0
    family carries the dimensionless temperature theta explicitly)."""
    a = b.alpha
    n = b.term_logpow
    if b.part == C1T and not T > 0:
        raise DomainError("C1 at T > 0 needs theta > 0")
    if b.resonance_ints is not None and b.cls == FIRST_CLASS:
        m, nn = b.resonance_ints
        sign = -1.0 if m % 2 else 1.0
        if b.part == C1T:
            return coeff * math.pi * T * nn * sign * math.factorial(2 * m)
        if b.part == C1T0:
            return coeff * math.pi * nn * sign * math.factorial(2 * m) / 2.0
        return coeff * math.pi * nn * sign * math.factorial(1 + 2 * m) / 2.0
    if b.part == C1T:
        trig = _cos_half_pi(a)
        value = coeff * 2.0 * T * trig * gamma(a)
    elif b.part == C1T0:
        trig = _sin_half_pi(a)
        value = -coeff * trig * gamma(1.0 + a)
    else:
        trig = _cos_half_pi(a)
        value = coeff * trig * gamma(1.0 + a)
    if trig != 0.0 and abs(trig) < NEAR_RESONANCE:
        warnings.warn(
            f"alpha={a!r} is within {NEAR_RESONANCE:g} of a resonance for {b.part}; "
            "the generic prefactor is ill-conditioned",
            NearResonanceWarning,
            stacklevel=2,
        )
    return value


def second_class_secondary(part: str, alpha: float, beta: float, w: float, T: float) -> float:
    """Coefficient of the ln^{beta - 1} companion term of the two-term laws."""
    c, s = _cos_half_pi(alpha), _sin_half_pi(alpha)
    if part == C1T:
        k = gamma_kernel(alpha)
        return w * 2.0 * T * (math.pi * beta * s * k.gamma / 2.0 - beta * c * k.gamma_prime)
    k = gamma_kernel(1.0 + alpha)
    if part == C1T0:
        return w * (math.pi * beta * k.gamma * c / 2.0 + beta * s * k.gamma_prime)
    return w * beta * (math.pi * s * k.gamma / 2.0 - c * k.gamma_prime)


# -- branch selection ---------------------------------------------------------------


def select_branch(exp: LowFreqExpansion, part: str, T: float = 0.0) -> AsymptoticBranch:
    """Pick the long-time law from a low-frequency expansion.

    Terms are scanned in order.  A term whose power is not a resonant integer
    gives the generic law; a resonant power with log power n > 0 gives the
    resonant law with one log power less; a resonant power with n = 0
    contributes nothing and the scan moves on.  Resonant integers are odd for
    C_1 at T > 0 and for C_2, even for C_1 at T = 0.
    """
    if part not in PARTS:
        raise DomainError(f"unknown part {part!r}")
    if part == C1T and not T > 0:
        raise DomainError("part C1T requires theta > 0")
    if part != C1T:
        T = 0.0
    shift = _shift(part)
    if exp.cls == SECOND_CLASS and abs(exp.leading.logpow) > 1e-12:
        t0 = exp.leading
        res = _resonant(t0.power, part)
        b = AsymptoticBranch(
            part=part, law="second-class-two-term", used_term_index=0, power=t0.power + shift,
            logpow=t0.logpow, prefactor=0.0, alpha=t0.power, term_logpow=t0.logpow, cls=SECOND_CLASS,
            resonance_ints=None if res is None else (res, t0.logpow),
        )
        with warnings.catch_warnings():
            if res is not None:
                warnings.simplefilter("ignore", NearResonanceWarning)
            pref = branch_coefficient(b, t0.coeff, T)
        sec = second_class_secondary(part, t0.power, t0.logpow, t0.coeff, T)
        return _replace(b, prefactor=pref, secondary=LawTerm(b.power, t0.logpow - 1.0, sec))

    for j, term in enumerate(exp.terms):
        n = int(round(term.logpow))
        m = _resonant(term.power, part)
        if m is not None and n == 0:
            continue
        prefix = "cascaded-" if j > 0 else ""
        if m is not None:
            b = AsymptoticBranch(part, prefix + "resonant", j, term.power + shift, n - 1, 0.0, term.power, n,
                                 resonance_ints=(m, n))
        else:
            b = AsymptoticBranch(part, prefix + "generic", j, term.power + shift, n, 0.0, term.power, n)
        return _replace(b, prefactor=branch_coefficient(b, term.coeff, T))
    raise ExpansionExhaustedError(
        f"all {len(exp)} expansion terms are resonant with vanishing log power for {part}; "
        "supply more terms"
    )


def _replace(b, **kw):
    from dataclasses import replace

    return replace(b, **kw)


# -- full log-order series -------------------------------------------------------------


def gamma_phase_derivatives(a: float, K: int) -> List[complex]:
    """d^k/de^k [Gamma(a + e) e^{i pi (a + e)/2}] at e = 0 for k < K."""
    h = [complex(polygamma(0, a), math.pi / 2.0)] + [complex(polygamma(j, a), 0.0) for j in range(1, K)]
    D = [1.0 + 0j]
    for k in range(K - 1):
        D.append(sum(math.comb(k, j) * h[j] * D[k - j] for j in range(k + 1)))
    ka = _as_int(a)
    if ka is None:
        phase = complex(math.cos(math.pi * a / 2.0), math.sin(math.pi * a / 2.0))
    else:
        phase = (1, 1j, -1, -1j)[ka % 4]
    g = gamma(a)
    return [g * phase * d for d in D]


def _binom(b: float, k: int) -> float:
    out = 1.0
    for i in range(k):
        out *= (b - i) / (i + 1)
    return out


def log_order_terms(power: float, logpow: float, coeff: float, part: str, orders: Optional[int] = None) -> List[LawTerm]:
    """Large-tau expansion of the transform of coeff nu^power (-ln nu)^logpow.

    The sine part (C_2) takes the imaginary part, cosine parts the real part;
    a = power + 1.  Integer log powers give a finite sum.
    """
    a = power + 1.0
    nint = _as_int(logpow)
    if orders is None:
        orders = nint + 1 if nint is not None and nint >= 0 else 2
    derivs = gamma_phase_derivatives(a, orders)
    out = []
    for k in range(orders):
        c = _binom(logpow, k) * (-1.0) ** k
        if c == 0.0:
            break
        val = derivs[k].imag if part == C2 else derivs[k].real
        if val != 0.0:
            out.append(LawTerm(a, logpow - k, coeff * c * val))
    return out


def _coth_laurent(theta: float, K: int):
    """(power shift, coefficient) pairs of coth(nu / 2 theta) = sum b_k nu^{2k-1}."""
    out = [(-1, 2.0 * theta)]
    for k in range(1, K):
        b2k = _BERNOULLI_EVEN[k - 1]
        out.append((2 * k - 1, 4.0**k * b2k / math.factorial(2 * k) * (2.0 * theta) ** (1 - 2 * k)))
    return out


def thermal_expansion(exp: LowFreqExpansion, theta: float) -> List[ExpansionTerm]:
    """Small-nu expansion of Omega_T = Omega coth(nu / 2 theta), like powers merged."""
    top = exp.terms[-1].power - 1.0 + 1e-9
    merged = {}
    for t in exp.terms:
        for shift, b in _coth_laurent(theta, len(_BERNOULLI_EVEN)):
            p = t.power + shift
            if p > top:
                break
            key = (round(p, 9), t.logpow)
            merged[key] = merged.get(key, 0.0) + t.coeff * b
    return [ExpansionTerm(p, lp, c) for (p, lp), c in sorted(merged.items())]


def full_law_terms(exp: LowFreqExpansion, part: str, T: float = 0.0) -> List[LawTerm]:
    """All power-log contributions implied by a first-class expansion."""
    if exp.cls != FIRST_CLASS:
        raise DomainError("complete log-order series is only defined for first-class expansions")
    terms = thermal_expansion(exp, T) if part == C1T else list(exp.terms)
    out = []
    for t in terms:
        out.extend(log_order_terms(t.power, t.logpow, t.coeff, part))
    out.sort(key=lambda lt: (lt.power, -lt.logpow))
    return out


# -- kink of |ln nu|^n at nu = 1 --------------------------------------------------------------

_KINK_RADIUS = 0.5
_KINK_NODES = 64


@lru_cache(maxsize=256)
def _kink_taylor(q, alpha, l, n, theta, thermal):
    """Taylor coefficients of q nu^alpha e^{-l nu} (ln nu)^n [coth] about nu = 1."""
    z = _KINK_RADIUS * np.exp(2j * np.pi * np.arange(_KINK_NODES) / _KINK_NODES)
    nu = 1.0 + z
    g = q * nu**alpha * np.exp(-l * nu) * np.log(nu) ** n
    if thermal and theta > 0:
        g = g / np.tanh(nu / (2.0 * theta))
    coef = np.fft.fft(g) / _KINK_NODES
    return tuple((coef / _KINK_RADIUS ** np.arange(_KINK_NODES)).real)


def kink_contribution(sd: SpectralDensity, T: float, tau: float, component: str, orders: int = 6) -> float:
    """Large-tau contribution of the derivative jump of |ln nu|^n (odd n) at nu = 1.

    With f = sign(nu - 1) g(nu) and g smooth,
    int f e^{i nu tau} ~ -2 e^{i tau} sum_k (-1)^k g^(k)(1) / (i tau)^(k+1).
    """
    if sd.kind != INT_LOG or sd.logpow % 2 == 0:
        return 0.0
    n = sd.logpow
    thermal = component == "xi1"
    a = _kink_taylor(sd.q, sd.alpha, sd.l, n, float(T), thermal)
    s = 0j
    for k in range(n, n + orders):
        s += (-1) ** k * a[k] * math.factorial(k) / (1j * tau) ** (k + 1)
    val = -2.0 * complex(math.cos(tau), math.sin(tau)) * s
    return val.real if component == "xi1" else val.imag


# -- evaluators -----------------------------------------------------------------------------


def branches(sd: SpectralDensity, T: float, J_terms: int = 8):
    """(xi1 branch, xi2 branch) for a spectral density."""
    exp = low_freq_expansion(sd, J_terms)
    return select_branch(exp, part_for("xi1", T), T), select_branch(exp, C2, T)


def _series_value(exp, part, T, taus, order):
    if exp.cls == SECOND_CLASS and abs(exp.leading.logpow) > 1e-12:
        b = select_branch(exp, part, T)
        return law_value(b, taus), b.terms()
    if exp.cls == SECOND_CLASS:
        exp = LowFreqExpansion(FIRST_CLASS, tuple(ExpansionTerm(t.power, 0, t.coeff) for t in exp.terms))
    if order == "leading":
        b = select_branch(exp, part, T)
        return law_value(b, taus), [b.leading]
    terms = full_law_terms(exp, part, T)
    return sum(t(taus) for t in terms), terms


def bcf_asymptotic(sd: SpectralDensity, T: float, taus: Iterable[float], order: str = "full",
                   J_terms: int = 8) -> List[BcfSample]:
    """Long-time evaluation for tau > e.

    ``order='leading'`` evaluates only the selected laws (both terms for the
    second class).  ``order='full'`` (default) adds every log order and every
    expansion term, plus the nu = 1 kink term for odd integer n.  err1/err2
    hold the size of the first neglected contribution.
    """
    if order not in ("leading", "full"):
        raise DomainError("order must be 'leading' or 'full'")
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    if np.any(taus <= math.e):
        raise PreconditionError("asymptotic evaluation needs tau > e (ln tau > 1)")
    exp = low_freq_expansion(sd, J_terms)
    exp_more = low_freq_expansion(sd, J_terms + 1) if sd.kind != "tabulated" else None
    cols = []
    for comp in ("xi1", "xi2"):
        part = part_for(comp, T)
        val, used = _series_value(exp, part, T, taus, order)
        if order == "full":
            kink = np.array([kink_contribution(sd, T, t, comp) for t in taus])
            val = val + kink
            if exp_more is not None:
                more, _ = _series_value(exp_more, part, T, taus, order)
                err = np.abs(more - (val - kink))
            else:
                err = np.zeros_like(taus)
        else:
            err = _first_neglected(exp, part, T, taus, used)
        cols.append((val, err))
    (x1, e1), (x2, e2) = cols
    return [BcfSample(float(t), float(a), float(b), float(c), float(d)) for t, a, b, c, d in zip(taus, x1, x2, e1, e2)]


def _first_neglected(exp, part, T, taus, used):
    if exp.cls == SECOND_CLASS and abs(exp.leading.logpow) > 1e-12:
        t0 = exp.leading
        extra = log_order_terms(t0.power - (1.0 if part == C1T else 0.0), t0.logpow, t0.coeff, part, orders=3)
        nxt = extra[2:3]
    else:
        if exp.cls == SECOND_CLASS:
            exp = LowFreqExpansion(FIRST_CLASS, tuple(ExpansionTerm(t.power, 0, t.coeff) for t in exp.terms))
        allt = full_law_terms(exp, part, T)
        lead = used[0]
        nxt = [t for t in allt if (t.power, -t.logpow) > (lead.power, -lead.logpow)][:1]
    if not nxt:
        return np.zeros_like(taus)
    return np.abs(nxt[0](taus))


# -- short times -----------------------------------------------------------------------------------


def short_time(sd: SpectralDensity, T: float, taus: Iterable[float]) -> List[BcfSample]:
    """xi1 ~ C_1(0) - l_1 tau^2, xi2 ~ l_2 tau with l_1 = m_2 / 2 and l_2 = m_1."""
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    if np.any(taus < 0):
        raise DomainError("tau must be >= 0")
    if not sd.chi0 > 2:
        raise PreconditionError(f"chi0 = {sd.chi0:g} <= 2: the quadratic short-time law of C_1 requires chi0 > 2")
    if not sd.chi0 > 1:
        raise PreconditionError(f"chi0 = {sd.chi0:g} <= 1: the linear short-time law of C_2 requires chi0 > 1")
    m0 = moment(sd, 0, T)
    m1 = moment(sd, 1, T)
    m2 = moment(sd, 2, T)
    m3 = _raw_moment(sd, 3, T, thermal=False)[0] if sd.chi0 > 3 else math.inf
    m4 = _raw_moment(sd, 4, T, thermal=True)[0] if sd.chi0 > 4 else math.inf
    out = []
    for t in taus:
        out.append(BcfSample(float(t), m0 - 0.5 * m2 * t * t, m1 * t, m4 * t**4 / 24.0 if t else 0.0,
                             m3 * t**3 / 6.0 if t else 0.0))
    return out
