"""The acceptance criteria as runnable checks.

Each check returns a :class:`CriterionResult`; nothing here loosens a
threshold to make a check pass.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence

import numpy as np

from .asymptotics import C1T0, C2, branch_coefficient, branches, select_branch
from .harness import FIGURES, SHORT_WINDOW, fit_slope, figure_grid, short_time_slope, tail_law_samples
from .mellin import gamma_line_ratio, mellin_closed_form, mellin_numeric, pole_residue
from .quad import bcf_numeric, moment
from .sd import FIRST_CLASS, ExpansionTerm, LowFreqExpansion, make_log_ohmic


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:2d} [{verdict}] {self.title}: {self.detail} ({self.seconds:.2f}s)"


def _ohmic():
    return make_log_ohmic(1.0, 1.0, 1.0, 0)


def ohmic_oracle():
    taus = np.geomspace(1e-3, 50.0, 200)
    t0 = time.perf_counter()
    got = bcf_numeric(_ohmic(), 0.0, taus)
    elapsed = time.perf_counter() - t0
    exact = 1.0 / (1.0 - 1j * taus) ** 2
    e1 = max(abs(s.xi1 - z.real) for s, z in zip(got, exact))
    e2 = max(abs(s.xi2 - z.imag) for s, z in zip(got, exact))
    ok = e1 <= 1e-8 and e2 <= 1e-8 and elapsed < 10.0
    return ok, f"max |err| xi1={e1:.2e} xi2={e2:.2e}, quadrature {elapsed:.2f}s"


def moment_identities():
    sd = _ohmic()
    vals = [moment(sd, p, 0.0) for p in (0, 1, 2)]
    rel = [abs(v - e) / e for v, e in zip(vals, (1.0, 2.0, 6.0))]
    return max(rel) <= 1e-10, "relative errors " + ", ".join(f"{r:.1e}" for r in rel)


def short_time_slopes():
    bad = []
    worst = 0.0
    for fig, comp, target in ((2, "xi1", 2.0), (4, "xi2", 1.0)):
        for c in FIGURES[fig].curves:
            fit = short_time_slope(c.sd(), comp)
            dev = abs(fit.slope - target)
            worst = max(worst, dev)
            if dev > 0.05:
                bad.append(f"fig{fig}({c.label})={fit.slope:.3f}")
    detail = f"max |slope - target| = {worst:.3f}"
    if bad:
        detail += "; outside 0.05: " + " ".join(bad)
    return not bad, detail


def long_time_convergence():
    from .asymptotics import bcf_asymptotic

    worst = 0.0
    for a in (0.5, 2.5):
        for l in (1.0, 2.0):
            for n in (0, 1, 2):
                sd = make_log_ohmic(1.0, a, l, n)
                num = bcf_numeric(sd, 0.0, [1e3])[0]
                asy = bcf_asymptotic(sd, 0.0, [1e3])[0]
                worst = max(worst, abs(num.xi1 / asy.xi1 - 1.0), abs(num.xi2 / asy.xi2 - 1.0))
    return worst <= 0.05, f"max |ratio - 1| at tau=1e3 over 12 densities = {worst:.2e}"


def cascade_rule():
    b = branches(_ohmic(), 0.0)[1]
    tau = 1e3
    closed = 2.0 * tau / (1.0 + tau * tau) ** 2
    law = b.prefactor * tau ** (-b.power) * math.log(tau) ** b.logpow
    rel = abs(law / closed - 1.0)
    ok = b.power == 3.0 and b.logpow == 0 and b.prefactor == 2.0 and rel <= 5e-3
    return ok, f"{b.law} p={b.power:g} m={b.logpow} prefactor={b.prefactor!r}, |law/closed - 1|={rel:.1e}"


def resonant_coefficients():
    b2 = select_branch(LowFreqExpansion(FIRST_CLASS, (ExpansionTerm(1.0, 1, 1.0),)), C2)
    b10 = select_branch(LowFreqExpansion(FIRST_CLASS, (ExpansionTerm(2.0, 1, 1.0),)), C1T0)
    r2 = branch_coefficient(b2, 1.0, 0.0)
    r10 = branch_coefficient(b10, 1.0, 0.0)
    e2, e10 = abs(r2 - math.pi / 2.0), abs(r10 + math.pi)
    ok = e2 <= 1e-12 and e10 <= 1e-12 and b2.resonance_ints == (0, 1) and b10.resonance_ints == (1, 1)
    return ok, f"C2 resonant {r2!r} (err {e2:.0e}), C1 T=0 resonant {r10!r} (err {e10:.0e})"


def mellin_oracle():
    worst = 0.0
    for a in np.linspace(0.5, 3.0, 5):
        for l in np.linspace(0.5, 3.0, 5):
            sd = make_log_ohmic(1.0, float(a), float(l), 0)
            for re in (0.3, 0.7, 1.2):
                for im in (0.0, 5.0):
                    s = complex(re, im)
                    worst = max(worst, abs(mellin_numeric(sd, 0.0, s) / mellin_closed_form(sd, s) - 1.0))
    ratio_dev = 0.0
    monotone = True
    for re in (0.3, 0.5, 0.8):
        devs = [abs(gamma_line_ratio(complex(re, t)) - 1.0) for t in (20.0, 40.0, 80.0, 160.0)]
        ratio_dev = max(ratio_dev, max(devs))
        # at Re s = 1/2 the ratio is identically 1; allow round-off there
        monotone &= all(b <= a + 1e-12 for a, b in zip(devs, devs[1:]))
    res = pole_residue(_ohmic(), 3.0)
    ok = worst <= 1e-8 and ratio_dev <= 0.02 and monotone and abs(res + 2.0) < 1e-6
    return ok, (f"max rel err {worst:.1e}; vertical-line ratio dev {ratio_dev:.1e} (monotone={monotone}); "
                f"residue at s=3 {res.real:.6f}")


def tail_line_property(points: int = 201):
    bad = []
    worst = 0.0
    for fig, comp, transform in ((5, "xi1", "tail-C1T0"), (6, "xi2", "tail-C2")):
        taus = figure_grid(fig, points)
        for c in FIGURES[fig].curves:
            fit = fit_slope(tail_law_samples(c, comp, taus), transform, FIGURES[fig].tau_range, alpha=c.alpha)
            dev = abs(fit.slope - c.n)
            worst = max(worst, dev)
            if dev > 0.1 or fit.rms_residual > 1e-2:
                bad.append(f"fig{fig}({c.label}) slope={fit.slope:.3f} vs n={c.n}")
    detail = f"max |slope - n| = {worst:.3f}"
    if bad:
        detail += "; failing: " + " ".join(bad)
    return not bad, detail


def temperature_transition():
    sd = make_log_ohmic(1.0, 0.5, 1.0, 0)
    hot = branches(sd, 1.0)[0]
    cold = branches(sd, 0.0)[0]
    ok = hot.power == 0.5 and cold.power == 1.5
    return ok, f"C1 power theta=1: {hot.power:g}, theta=0: {cold.power:g}"


def validation_gate():
    from .cli import main

    t0 = time.perf_counter()
    code = main(["validate", "--suite", "full"], stdout=_Null())
    elapsed = time.perf_counter() - t0
    return code == 0 and elapsed < 900.0, f"validate --suite full exit {code} in {elapsed:.1f}s"


class _Null:
    def write(self, s):
        return len(s)

    def flush(self):
        pass


CRITERIA: Dict[int, tuple] = {
    1: ("Ohmic closed-form oracle", ohmic_oracle),
    2: ("moment identities", moment_identities),
    3: ("short-time slopes of Figs. 2 and 4", short_time_slopes),
    4: ("long-time law convergence", long_time_convergence),
    5: ("cascade correctness", cascade_rule),
    6: ("resonant coefficients", resonant_coefficients),
    7: ("Mellin oracle", mellin_oracle),
    8: ("Figs. 5 and 6 line property", tail_line_property),
    9: ("temperature transition", temperature_transition),
    10: ("validation gate", validation_gate),
}

SUITES = {
    "ohmic": (1, 2, 5),
    "full": tuple(range(1, 10)),
}


def run_criterion(number: int) -> CriterionResult:
    title, fn = CRITERIA[number]
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure, reported with its cause
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CriterionResult(number, title, bool(ok), detail, time.perf_counter() - t0)


def run_suite(name: str) -> List[CriterionResult]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return [run_criterion(k) for k in SUITES[name]]
