"""Cross-checks between quadrature and asymptotics, slope fits and figure data."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .asymptotics import C1T0, C2, bcf_asymptotic, branches, law_value, select_branch
from .errors import PreconditionError, ToleranceError
from .quad import DEFAULT_CONFIG, BcfSample, QuadConfig, bcf_numeric
from .sd import SpectralDensity, low_freq_expansion, make_log_ohmic

TRANSFORMS = ("loglog-short-C1", "loglog-short-C2", "tail-C1T0", "tail-C2", "tail-C1T")
SHORT_WINDOW = (math.exp(-3.0), math.exp(-1.5))
MIN_FIT_SAMPLES = 8


# -- slope fits ------------------------------------------------------------------


@dataclass(frozen=True)
class SlopeFit:
    transform: str
    window: Tuple[float, float]
    slope: float
    intercept: float
    rms_residual: float
    samples: int


def transform_xy(samples: Sequence[BcfSample], transform: str, alpha: Optional[float] = None,
                 baseline: Optional[float] = None):
    """Map samples to the (x, y) coordinates in which a law is a straight line."""
    if transform not in TRANSFORMS:
        raise ValueError(f"unknown transform {transform!r}; expected one of {TRANSFORMS}")
    tau = np.array([s.tau for s in samples])
    if transform == "loglog-short-C1":
        if baseline is None:
            raise ValueError("loglog-short-C1 needs the baseline xi1(0)")
        return np.log(tau), np.log(np.abs(np.array([s.xi1 for s in samples]) - baseline))
    if transform == "loglog-short-C2":
        return np.log(tau), np.log(np.abs([s.xi2 for s in samples]))
    if alpha is None:
        raise ValueError(f"{transform} needs alpha")
    if transform == "tail-C2":
        vals, power = np.array([s.xi2 for s in samples]), 1.0 + alpha
    else:
        vals = np.array([s.xi1 for s in samples])
        power = alpha if transform == "tail-C1T" else 1.0 + alpha
    return np.log(np.log(tau)), power * np.log(tau) + np.log(np.abs(vals))


def fit_slope(samples: Sequence[BcfSample], transform: str, window: Tuple[float, float],
              alpha: Optional[float] = None, baseline: Optional[float] = None) -> SlopeFit:
    """Ordinary least squares in the figure coordinates, on samples with tau in window."""
    lo, hi = window
    if not lo < hi:
        raise PreconditionError("window must be non-empty")
    inside = [s for s in samples if lo <= s.tau <= hi]
    if len(inside) < MIN_FIT_SAMPLES:
        raise PreconditionError(f"slope fit needs >= {MIN_FIT_SAMPLES} samples in the window, got {len(inside)}")
    x, y = transform_xy(inside, transform, alpha, baseline)
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    rms = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return SlopeFit(transform, (float(lo), float(hi)), float(slope), float(intercept), rms, len(inside))


def short_time_slope(sd: SpectralDensity, component: str, window=SHORT_WINDOW, points: int = 24,
                     T: float = 0.0, cfg: QuadConfig = DEFAULT_CONFIG) -> SlopeFit:
    """Fitted log-log slope of |xi1 - xi1(0)| or |xi2| from quadrature."""
    taus = np.geomspace(window[0], window[1], points)
    samples = bcf_numeric(sd, T, np.concatenate([[0.0], taus]), cfg)
    base, rest = samples[0], samples[1:]
    if component == "xi1":
        return fit_slope(rest, "loglog-short-C1", window, baseline=base.xi1)
    return fit_slope(rest, "loglog-short-C2", window)


# -- comparison ----------------------------------------------------------------------


@dataclass(frozen=True)
class ComparisonReport:
    taus: np.ndarray
    ratio_xi1: np.ndarray
    ratio_xi2: np.ndarray
    edge_deviation: float
    max_deviation: float
    tolerance: float
    verdict: bool

    def rows(self):
        for t, a, b in zip(self.taus, self.ratio_xi1, self.ratio_xi2):
            yield float(t), float(a), float(b)


def compare(sd: SpectralDensity, T: float, window: Tuple[float, float], cfg: QuadConfig = DEFAULT_CONFIG,
            points: int = 9, tolerance: float = 0.05, order: str = "full") -> ComparisonReport:
    """numeric / asymptotic ratios on a log grid; the verdict looks at the right edge."""
    lo, hi = window
    if not (math.e < lo < hi <= cfg.tau_max_direct):
        raise PreconditionError(f"comparison window must lie in (e, {cfg.tau_max_direct:g}] (ln tau > 1)")
    taus = np.geomspace(lo, hi, points)
    num = bcf_numeric(sd, T, taus, cfg)
    asy = bcf_asymptotic(sd, T, taus, order=order)
    r1 = np.array([a.xi1 / b.xi1 for a, b in zip(num, asy)])
    r2 = np.array([a.xi2 / b.xi2 for a, b in zip(num, asy)])
    dev = np.maximum(np.abs(r1 - 1.0), np.abs(r2 - 1.0))
    edge = float(dev[-1])
    return ComparisonReport(taus, r1, r2, edge, float(dev.max()), tolerance, bool(edge <= tolerance))


# -- figure catalogue ----------------------------------------------------------------------


@dataclass(frozen=True)
class Curve:
    label: str
    alpha: float
    l: float
    n: int
    n_elided: bool = False

    def sd(self) -> SpectralDensity:
        return make_log_ohmic(1.0, self.alpha, self.l, self.n)


@dataclass(frozen=True)
class FigureSpec:
    fig: int
    component: str
    x_label: str
    y_label: str
    tau_range: Tuple[float, float]
    curves: Tuple[Curve, ...]


def _curves(spec: str) -> Tuple[Curve, ...]:
    out = []
    for item in spec.split(";"):
        label, a, l, n = item.split()
        elided = n.endswith("?")
        out.append(Curve(label, float(a), float(l), int(n.rstrip("?")), elided))
    return tuple(out)


# "?" marks a log power whose "n =" label is missing from the caption
FIGURES: Dict[int, FigureSpec] = {
    1: FigureSpec(1, "xi1", "tau^2", "xi1(tau) - xi1(0)", (0.0, 1.0), _curves(
        "a 1 1 6;b 2.1 1.2 4;c 1.7 1.1 4;d 1.6 1.1 4;e 1.8 1.2 4;f 1.6 1.2 4;g 0.1 0.8 4;h 1 1 2?;i 1.5 1.5 4")),
    2: FigureSpec(2, "xi1", "ln tau", "ln|xi1(tau) - xi1(0)|", (math.exp(-3.0), math.e), _curves(
        "a 2 1.2 6;b 1 1 6;c 1.6 1.1 4;d 2 1.3 4;e 0.3 0.9 4;f 1 1 2;g 0.2 1 4;h 1.5 1.5 4?;i 1 1.4 4;j 1.6 1.7 4")),
    3: FigureSpec(3, "xi2", "tau", "xi2(tau)", (0.0, 2.0), _curves(
        "a 4.8 1.8 6;b 5 1.9 6;c 4.9 1.9 6;d 5 2 6;e 3 1.1 2;f 2.1 1.1 4;g 1 1 4")),
    4: FigureSpec(4, "xi2", "ln tau", "ln|xi2(tau)|", (math.exp(-3.0), math.e), _curves(
        "a 3.4 0.3 2;b 10 2 2;c 5 1 2;d 5 1.9 6;e 2 1 4;f 1 1 4;g 0.1 1 4;h 1 1.9 6?;i 1.2 8 6;j 0.1 10 2")),
    5: FigureSpec(5, "xi1", "ln ln tau", "ln(tau^(1+alpha)|xi1|)", (math.exp(math.exp(-1.0)), math.exp(math.exp(4.0))),
                  _curves("a 2 1 6;b 0.4 2 6;c 0.3 10 6;d 7 2 2;e 0.5 2 4;f 2 1 4;g 3.5 1 2;h 0.4 0.01 2?;"
                          "i 2 1 2;j 0.01 10 2")),
    6: FigureSpec(6, "xi2", "ln ln tau", "ln(tau^(1+alpha)|xi2|)", (math.exp(math.exp(-1.4)), math.exp(math.exp(2.4))),
                  _curves("a 2 1 6;b 1 0.1 6;c 5 2 4;d 1 5 4;e 2 0.5 2;f 0.2 0.01 2;g 1 1.5 2")),
}


def figure_grid(fig: int, points: int = 101) -> np.ndarray:
    """tau grid of a figure: uniform in the plotted abscissa."""
    spec = FIGURES[fig]
    lo, hi = spec.tau_range
    if fig == 1:
        return np.sqrt(np.linspace(0.0, 1.0, points))
    if fig == 3:
        return np.linspace(lo, hi, points)
    if fig in (2, 4):
        return np.exp(np.linspace(math.log(lo), math.log(hi), points))
    return np.exp(np.exp(np.linspace(math.log(math.log(lo)), math.log(math.log(hi)), points)))


def tail_law_samples(curve: Curve, component: str, taus) -> List[BcfSample]:
    """Leading law of the selected branch on tau > 1 (the quantity of the long-time figures)."""
    exp = low_freq_expansion(curve.sd())
    b = select_branch(exp, C1T0 if component == "xi1" else C2, 0.0)
    vals = law_value(b, taus)
    return [BcfSample(float(t), float(v), 0.0, 0.0, 0.0) if component == "xi1" else
            BcfSample(float(t), 0.0, float(v), 0.0, 0.0) for t, v in zip(taus, vals)]


RESOLVED_REL = 1e-3


def _tail_rows(spec: FigureSpec, curve: Curve, taus, cfg: QuadConfig):
    sd = curve.sd()
    comp = spec.component
    rows = []
    for t in taus:
        val, source = None, "asymptotic"
        if t <= cfg.tau_max_direct:
            try:
                s = bcf_numeric(sd, 0.0, [t], cfg)[0]
                v, e = (s.xi1, s.err1) if comp == "xi1" else (s.xi2, s.err2)
                if e <= RESOLVED_REL * abs(v):
                    val, source = v, "numeric"
            except ToleranceError:
                pass
        if val is None:
            if t > math.e:
                a = bcf_asymptotic(sd, 0.0, [t])[0]
                val = a.xi1 if comp == "xi1" else a.xi2
            else:
                val = law_value(branches(sd, 0.0)[0 if comp == "xi1" else 1], [t])[0]
        x = math.log(math.log(t))
        y = (1.0 + curve.alpha) * math.log(t) + math.log(abs(val)) if val != 0 else -math.inf
        rows.append((x, y, source))
    return rows


def figure_data(fig: int, points: int = 101, cfg: QuadConfig = DEFAULT_CONFIG):
    """Rows (fig, curve, x, y, source) for every captioned curve of a figure.

    Short-time figures come from quadrature.  In the long-time figures a row
    uses quadrature when tau <= tau_max_direct and the result is resolved to
    0.1 %; otherwise the asymptotic evaluator, and the row says so.
    """
    if fig not in FIGURES:
        raise ValueError(f"figure id must be 1..6, got {fig!r}")
    spec = FIGURES[fig]
    taus = figure_grid(fig, points)
    rows = []
    for curve in spec.curves:
        if fig in (5, 6):
            for x, y, src in _tail_rows(spec, curve, taus, cfg):
                rows.append((fig, curve.label, x, y, src))
            continue
        grid = taus if fig in (1, 3) else np.concatenate([[0.0], taus])
        samples = bcf_numeric(curve.sd(), 0.0, grid, cfg)
        base = samples[0].xi1
        body = samples if fig in (1, 3) else samples[1:]
        for s in body:
            if fig == 1:
                x, y = s.tau**2, s.xi1 - base
            elif fig == 2:
                x, y = math.log(s.tau), math.log(abs(s.xi1 - base))
            elif fig == 3:
                x, y = s.tau, s.xi2
            else:
                x, y = math.log(s.tau), math.log(abs(s.xi2))
            rows.append((fig, curve.label, x, y, "numeric"))
    return rows


def figure_metadata(fig: int) -> Dict[str, str]:
    """Sidecar key=value data: plotted quantities and caption caveats."""
    spec = FIGURES[fig]
    meta = {
        "fig": str(fig),
        "x": spec.x_label,
        "y": spec.y_label,
        "tau_min": repr(spec.tau_range[0]),
        "tau_max": repr(spec.tau_range[1]),
        "curves": ",".join(c.label for c in spec.curves),
    }
    elided = [c.label for c in spec.curves if c.n_elided]
    if elided:
        meta["n_elided"] = ",".join(elided)
        meta["n_elided_note"] = "caption omits 'n ='; trailing number read as n"
    return meta
