"""Run configuration, key = value files and CSV output."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Dict, Iterable, Optional, Sequence

import numpy as np

from .errors import DomainError

COMMANDS = ("bcf", "asympt", "short", "moments", "mellin", "figures", "validate")


class ConfigError(DomainError):
    pass


def parse_config_text(text: str, source: str = "<config>") -> Dict[str, str]:
    """Parse line-oriented ``key = value`` text; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (p.strip() for p in line.split("=", 1))
        if not key:
            raise ConfigError(f"{source}:{lineno}: empty key")
        out[key.replace("-", "_").lower()] = value
    return out


def read_config(path) -> Dict[str, str]:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config_text(text, str(p))


@dataclass
class RunConfig:
    command: str
    q: float = 1.0
    alpha: float = 1.0
    l: float = 1.0
    n: int = 0
    beta: Optional[float] = None
    table: Optional[str] = None
    chi0: float = math.inf
    T: float = 0.0
    tau: Optional[Sequence[float]] = None
    tau_start: Optional[float] = None
    tau_stop: Optional[float] = None
    tau_count: int = 1
    tau_spacing: str = "linear"
    out: Optional[str] = None
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    suite: str = "full"
    order: str = "full"
    fig: Optional[int] = None
    points: int = 101
    re_s: float = 0.5
    im_min: float = 10.0
    im_max: float = 80.0
    samples: int = 16

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.tau_count < 1:
            raise ConfigError("tau-count must be >= 1")
        if self.tau_spacing not in ("linear", "log"):
            raise ConfigError("tau-spacing must be 'linear' or 'log'")
        if self.tau_spacing == "log" and self.tau_start is not None and not self.tau_start > 0:
            raise ConfigError("log spacing requires tau-start > 0")

    def taus(self) -> np.ndarray:
        if self.tau is not None:
            return np.asarray(self.tau, dtype=float)
        if self.tau_start is None:
            raise ConfigError("no time grid: give --tau or --tau-start/--tau-stop/--tau-count")
        stop = self.tau_start if self.tau_stop is None else self.tau_stop
        if self.tau_count == 1:
            return np.array([self.tau_start])
        if self.tau_spacing == "log":
            return np.geomspace(self.tau_start, stop, self.tau_count)
        return np.linspace(self.tau_start, stop, self.tau_count)


_CASTS = {f.name: f.type for f in fields(RunConfig)}


def coerce(key: str, value: str):
    """Convert a config-file string to the RunConfig field type."""
    if key not in _CASTS:
        raise ConfigError(f"unknown config key {key!r}")
    kind = _CASTS[key]
    try:
        if key == "tau":
            return [float(v) for v in value.replace(",", " ").split()]
        if kind in ("int", "Optional[int]"):
            return int(value)
        if kind in ("float", "Optional[float]"):
            return float(value)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {value!r}") from exc
    return value


def fmt(x) -> str:
    """Decimal text with 17 significant digits for floats; str() otherwise."""
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def write_csv(stream, header: Sequence[str], rows: Iterable[Sequence]):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
