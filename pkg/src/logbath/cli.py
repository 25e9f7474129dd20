"""Command-line interface: ``logbath <command> [options]``.

Exit codes: 0 success, 2 configuration or precondition error, 3 numerical
failure, 4 validation failure.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import sys
from pathlib import Path
from typing import List, Optional

from . import acceptance, harness
from .asymptotics import bcf_asymptotic, branches, short_time
from .config import COMMANDS, ConfigError, RunConfig, coerce, read_config, write_csv
from .errors import DivergenceError, ExpansionExhaustedError, LogBathError, ToleranceError
from .mellin import decay_fit, profile_rows
from .quad import QuadConfig, bcf_numeric, moment
from .sd import load_table, make_log_ohmic, make_log_ohmic_real

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_VALIDATION = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="logbath", description="Bath correlation functions for log-modified spectral densities.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("fig", nargs="?", type=int, help="figure id (figures command)")
    g = p.add_argument_group("spectral density")
    g.add_argument("--q", type=float)
    g.add_argument("--alpha", type=float)
    g.add_argument("--l", type=float)
    g.add_argument("--n", type=int, help="integer log power")
    g.add_argument("--beta", type=float, help="real log power (selects the real-log family)")
    g.add_argument("--table", help="CSV file with header nu,omega (tabulated density)")
    g.add_argument("--chi0", type=float, help="declared high-frequency decay exponent of a table")
    g.add_argument("--T", type=float, help="dimensionless temperature theta")
    t = p.add_argument_group("time grid")
    t.add_argument("--tau", help="comma-separated tau values")
    t.add_argument("--tau-start", type=float)
    t.add_argument("--tau-stop", type=float)
    t.add_argument("--tau-count", type=int)
    t.add_argument("--tau-spacing", choices=("linear", "log"))
    o = p.add_argument_group("output and numerics")
    o.add_argument("--out")
    o.add_argument("--config")
    o.add_argument("--abs-tol", type=float)
    o.add_argument("--rel-tol", type=float)
    o.add_argument("--suite", choices=tuple(acceptance.SUITES))
    o.add_argument("--order", choices=("leading", "full"), help="asympt: leading laws or all log orders")
    o.add_argument("--points", type=int, help="figures: points per curve")
    m = p.add_argument_group("mellin")
    m.add_argument("--re-s", type=float)
    m.add_argument("--im-min", type=float)
    m.add_argument("--im-max", type=float)
    m.add_argument("--samples", type=int)
    return p


def make_config(argv: List[str]) -> RunConfig:
    ns = build_parser().parse_args(argv)
    values = {}
    if ns.config:
        values.update({k: coerce(k, v) for k, v in read_config(ns.config).items()})
    for key, val in vars(ns).items():
        if key in ("command", "config") or val is None:
            continue
        values[key] = coerce("tau", val) if key == "tau" else val
    if ns.command == "figures" and values.get("fig") is None:
        raise ConfigError("figures needs a figure id 1..6")
    return RunConfig(command=ns.command, **values)


def make_sd(cfg: RunConfig):
    if cfg.table:
        return load_table(cfg.table, chi0=cfg.chi0)
    if cfg.beta is not None:
        return make_log_ohmic_real(cfg.q, cfg.alpha, cfg.l, cfg.beta)
    return make_log_ohmic(cfg.q, cfg.alpha, cfg.l, cfg.n)


@contextlib.contextmanager
def _output(path, stdout):
    if path:
        with open(path, "w", newline="") as fh:
            yield fh
    else:
        yield stdout


def _sample_rows(samples):
    return ((s.tau, s.xi1, s.xi2, s.err1, s.err2) for s in samples)


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    qcfg = QuadConfig(abs_tol=cfg.abs_tol, rel_tol=cfg.rel_tol)
    cmd = cfg.command
    if cmd == "validate":
        results = acceptance.run_suite(cfg.suite)
        with _output(cfg.out, stdout) as fh:
            for r in results:
                fh.write(r.line() + "\n")
        return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATION
    if cmd == "figures":
        if cfg.fig not in harness.FIGURES:
            raise ConfigError(f"figure id must be 1..6, got {cfg.fig}")
        rows = harness.figure_data(cfg.fig, cfg.points, qcfg)
        with _output(cfg.out, stdout) as fh:
            write_csv(fh, ("fig", "curve", "x", "y", "source"), rows)
        if cfg.out:
            meta = harness.figure_metadata(cfg.fig)
            Path(cfg.out + ".meta").write_text("".join(f"{k} = {v}\n" for k, v in meta.items()))
        return EXIT_OK
    sd = make_sd(cfg)
    if cmd == "moments":
        rows = [(f"m{p}", moment(sd, p, cfg.T, qcfg)) for p in (0, 1, 2)]
        rows.append(("c1_0", rows[0][1]))
        with _output(cfg.out, stdout) as fh:
            write_csv(fh, ("quantity", "value"), rows)
        return EXIT_OK
    if cmd == "mellin":
        prof = decay_fit(sd, cfg.T, cfg.re_s, (cfg.im_min, cfg.im_max), cfg.samples, cfg=qcfg)
        with _output(cfg.out, stdout) as fh:
            write_csv(fh, ("re_s", "im_s", "re_val", "im_val", "abs_val"), profile_rows(prof))
        if cfg.out:
            Path(cfg.out + ".fit").write_text(prof.summary())
        else:
            stderr.write(prof.summary())
        return EXIT_OK
    taus = cfg.taus()
    header = ("tau", "xi1", "xi2", "err1", "err2")
    if cmd == "bcf":
        samples = bcf_numeric(sd, cfg.T, taus, qcfg)
        rows = _sample_rows(samples)
    elif cmd == "short":
        rows = _sample_rows(short_time(sd, cfg.T, taus))
    else:
        b1, b2 = branches(sd, cfg.T)
        law = (f"{b1.law}/{b2.law}", f"{b1.power:g}/{b2.power:g}", f"{b1.logpow:g}/{b2.logpow:g}",
               f"{b1.used_term_index}/{b2.used_term_index}")
        samples = bcf_asymptotic(sd, cfg.T, taus, order=cfg.order)
        header = header + ("law", "p", "m", "term_index")
        rows = (r + law for r in _sample_rows(samples))
    with _output(cfg.out, stdout) as fh:
        write_csv(fh, header, rows)
    return EXIT_OK


def main(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    stderr = stderr or sys.stderr
    try:
        cfg = make_config(argv)
        return run(cfg, stdout, stderr)
    except (ToleranceError, DivergenceError) as exc:
        stderr.write(f"logbath: numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except (LogBathError, ValueError, OSError) as exc:
        stderr.write(f"logbath: {exc}\n")
        return EXIT_CONFIG


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
