"""Spectral densities with removable logarithmic singularities at low frequency.

All evaluation happens on the dimensionless auxiliary function
``Omega(nu) = J(omega_s * nu) / omega_s``; ``omega_s`` only enters through
:meth:`SpectralDensity.J`.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, UnsupportedKindError

INT_LOG = "canonical-int-log"
REAL_LOG = "canonical-real-log"
TABULATED = "tabulated"
KINDS = (INT_LOG, REAL_LOG, TABULATED)

DEFAULT_TERMS = 8
FIRST_CLASS = "first"
SECOND_CLASS = "second"


@dataclass(frozen=True)
class ExpansionTerm:
    power: float
    logpow: float
    coeff: float


@dataclass(frozen=True)
class LowFreqExpansion:
    """Truncated nu -> 0 expansion  sum_j coeff_j nu^power_j (-ln nu)^logpow_j."""

    cls: str
    terms: tuple

    def __post_init__(self):
        if self.cls not in (FIRST_CLASS, SECOND_CLASS):
            raise DomainError(f"unknown expansion class {self.cls!r}")
        if not self.terms:
            raise DomainError("expansion needs at least one term")
        if not self.terms[0].power > 0:
            raise DomainError("leading power alpha_0 must be > 0")
        for a, b in zip(self.terms, self.terms[1:]):
            if not b.power > a.power:
                raise DomainError("expansion powers must increase strictly")
        if self.cls == FIRST_CLASS:
            for t in self.terms:
                if t.logpow < 0 or t.logpow != int(t.logpow):
                    raise DomainError("first-class log powers must be integers >= 0")

    @property
    def leading(self) -> ExpansionTerm:
        return self.terms[0]

    def __len__(self):
        return len(self.terms)

    def __call__(self, nu):
        """Partial sum at 0 < nu < 1."""
        nu = np.asarray(nu, dtype=float)
        mlog = -np.log(nu)
        out = np.zeros_like(nu)
        for t in self.terms:
            out = out + t.coeff * nu**t.power * mlog**t.logpow
        return out


@dataclass(frozen=True)
class SpectralDensity:
    kind: str
    q: float = 1.0
    alpha: float = 1.0
    l: float = 1.0
    logpow: float = 0
    omega_s: float = 1.0
    chi0: float = math.inf
    table: Optional[tuple] = field(default=None, compare=False, repr=False)
    expansion: Optional[LowFreqExpansion] = field(default=None, compare=False, repr=False)
    _interp: object = field(default=None, init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown spectral density kind {self.kind!r}")
        if not self.omega_s > 0:
            raise DomainError("omega_s must be > 0")
        if self.kind == TABULATED:
            if self.table is None:
                raise DomainError("tabulated spectral density needs a (nu, omega) table")
            nu, om = (np.asarray(a, dtype=float) for a in self.table)
            if nu.ndim != 1 or nu.shape != om.shape or nu.size < 2:
                raise DomainError("table must be two equal-length 1-d columns with >= 2 rows")
            if not np.all(nu > 0) or not np.all(np.diff(nu) > 0):
                raise DomainError("table frequencies must be positive and strictly increasing")
            if np.any(om < 0):
                raise DomainError("spectral density samples must be >= 0")
            # shape-preserving cubic in ln(nu): no overshoot, so no negative values
            object.__setattr__(self, "_interp", PchipInterpolator(np.log(nu), om, extrapolate=False))
            object.__setattr__(self, "table", (nu, om))
            return
        if not self.q > 0:
            raise DomainError("q must be > 0")
        if not self.alpha > 0:
            raise DomainError("alpha must be > 0 (leading power alpha_0 > 0)")
        if not self.l > 0:
            raise DomainError("l must be > 0, otherwise the spectral density is not summable")
        if self.kind == INT_LOG and (self.logpow < 0 or self.logpow != int(self.logpow)):
            raise DomainError("integer log power n must be an integer >= 0")
        if self.kind == INT_LOG:
            object.__setattr__(self, "logpow", int(self.logpow))

    # -- evaluation ---------------------------------------------------------

    @property
    def is_canonical(self) -> bool:
        return self.kind != TABULATED

    @property
    def support_end(self) -> float:
        """Largest nu where Omega can be non-zero."""
        return float(self.table[0][-1]) if self.kind == TABULATED else math.inf

    def __call__(self, nu):
        nu_arr = np.asarray(nu, dtype=float)
        if np.any(nu_arr < 0):
            raise DomainError("spectral density is defined for nu >= 0 only")
        pos = nu_arr > 0
        safe = np.where(pos, nu_arr, 1.0)
        if self.kind == TABULATED:
            out = self._tabulated(safe)
        else:
            base = self.q * safe**self.alpha * np.exp(-self.l * safe)
            if self.kind == INT_LOG:
                out = base * np.abs(np.log(safe)) ** self.logpow if self.logpow else base
            else:
                out = base * np.log(math.e + 1.0 / safe) ** self.logpow
        out = np.where(pos, out, 0.0)
        return float(out) if np.ndim(nu) == 0 else out

    def _tabulated(self, nu):
        nus, oms = self.table
        out = self._interp(np.log(nu))
        out = np.where(nu < nus[0], oms[0] * nu / nus[0], out)
        out = np.where(nu > nus[-1], 0.0, out)
        return np.nan_to_num(out, nan=0.0)

    def scalar(self, nu: float) -> float:
        """Fast scalar Omega for quadrature callbacks (nu >= 0 assumed)."""
        if nu <= 0.0:
            return 0.0
        if self.kind == TABULATED:
            return float(self._tabulated(np.array([nu]))[0])
        base = self.q * nu**self.alpha * math.exp(-self.l * nu)
        if self.kind == INT_LOG:
            return base * abs(math.log(nu)) ** self.logpow if self.logpow else base
        return base * math.log(math.e + 1.0 / nu) ** self.logpow

    def J(self, omega):
        """Physical spectral density J(omega) = omega_s * Omega(omega / omega_s)."""
        return self.omega_s * self(np.asarray(omega, dtype=float) / self.omega_s)


# -- constructors ---------------------------------------------------------------


def make_log_ohmic(q: float, alpha: float, l: float, n: int, omega_s: float = 1.0) -> SpectralDensity:
    """q nu^alpha exp(-l nu) |ln nu|^n, the family used for every figure."""
    if isinstance(n, float) and not n.is_integer():
        raise DomainError("n must be an integer")
    return SpectralDensity(INT_LOG, q=q, alpha=alpha, l=l, logpow=int(n), omega_s=omega_s)


def make_log_ohmic_real(q: float, alpha: float, l: float, beta: float, omega_s: float = 1.0) -> SpectralDensity:
    """q nu^alpha exp(-l nu) ln(e + 1/nu)^beta.

    The log factor is positive everywhere, tends to 1 at high frequency and
    behaves as -ln(nu) (1 + O(nu / ln nu)) at low frequency, so the leading
    small-nu term is exactly q nu^alpha (-ln nu)^beta for any real beta.
    """
    return SpectralDensity(REAL_LOG, q=q, alpha=alpha, l=l, logpow=float(beta), omega_s=omega_s)


def make_tabulated(nu: Sequence[float], omega: Sequence[float], chi0: float = math.inf,
                   expansion: Optional[LowFreqExpansion] = None, omega_s: float = 1.0) -> SpectralDensity:
    """Monotone piecewise-cubic interpolant of samples on a (log-spaced) grid.

    Below the first node the density ramps linearly to Omega(0) = 0; above the
    last node it vanishes.
    """
    return SpectralDensity(TABULATED, table=(nu, omega), chi0=chi0, expansion=expansion, omega_s=omega_s)


def load_table(path, **kwargs) -> SpectralDensity:
    """Read a two-column CSV with header (nu, omega)."""
    nus, oms = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip().lower() for h in header[:2]] != ["nu", "omega"]:
            raise DomainError(f"{path}: expected header 'nu,omega', got {header!r}")
        for row in reader:
            if not row or row[0].lstrip().startswith("#"):
                continue
            nus.append(float(row[0]))
            oms.append(float(row[1]))
    return make_tabulated(nus, oms, **kwargs)


def evaluate(sd: SpectralDensity, nu: Union[float, np.ndarray]):
    """Omega(nu); exactly 0 at nu = 0."""
    return sd(nu)


# -- low-frequency structure -----------------------------------------------------


def low_freq_expansion(sd: SpectralDensity, J_terms: int = DEFAULT_TERMS) -> LowFreqExpansion:
    """Power-log expansion of Omega as nu -> 0.

    For the integer-log family the terms come from the Taylor series of
    exp(-l nu) with |ln nu| = -ln nu below nu = 1.  For the real-log family
    only the leading power carries its complete log structure; the higher
    powers keep the dominant log order (beta) with the exponential Taylor
    coefficients.
    """
    if J_terms < 1:
        raise DomainError("J_terms must be >= 1")
    if sd.kind == TABULATED:
        if sd.expansion is None:
            raise UnsupportedKindError("tabulated spectral densities need a declared low-frequency expansion")
        return sd.expansion
    cls = FIRST_CLASS if sd.kind == INT_LOG else SECOND_CLASS
    terms = tuple(
        ExpansionTerm(sd.alpha + j, sd.logpow, sd.q * (-sd.l) ** j / math.factorial(j)) for j in range(J_terms)
    )
    return LowFreqExpansion(cls, terms)


# -- admissibility -----------------------------------------------------------------


@dataclass(frozen=True)
class ConditionReport:
    thermal_integral_finite: bool
    thermal_integral: float
    sd_summable: bool
    short_time_quadratic_ok: bool
    short_time_linear_ok: bool
    notes: tuple = ()


def leading_power(sd: SpectralDensity) -> float:
    if sd.kind != TABULATED:
        return sd.alpha
    if sd.expansion is not None:
        return sd.expansion.leading.power
    return 1.0  # linear ramp below the first node


def check_conditions(sd: SpectralDensity, T: float) -> ConditionReport:
    """Evaluate the finiteness of int J coth dw and the short-time decay flags."""
    from .quad import moment  # local import: quad depends on this module

    if T < 0:
        raise DomainError("temperature must be >= 0")
    notes = []
    a0 = leading_power(sd)
    summable = math.isfinite(sd.support_end) or sd.l > 0
    finite = summable and (a0 > 0 if T > 0 else a0 > -1)
    value = math.inf
    if finite:
        value = moment(sd, 0, T)
        finite = math.isfinite(value)
    else:
        notes.append(f"thermal integral diverges: leading power {a0:g} <= 0")
    chi0 = sd.chi0
    if sd.kind == TABULATED:
        notes.append("high-frequency decay and Mellin hypotheses: declared, unverified")
    return ConditionReport(
        thermal_integral_finite=bool(finite),
        thermal_integral=float(value),
        sd_summable=bool(summable),
        short_time_quadratic_ok=chi0 > 2,
        short_time_linear_ok=chi0 > 1,
        notes=tuple(notes),
    )
