import io
import math

import pytest

from logbath.cli import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, EXIT_VALIDATION, main, make_config
from logbath.config import ConfigError, RunConfig, fmt, parse_config_text


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_bcf_row():
    code, out, _ = run(["bcf", "--alpha", "1", "--l", "1", "--n", "0", "--q", "1", "--T", "0", "--tau", "1"])
    assert code == EXIT_OK
    header, row = out.strip().splitlines()
    assert header == "tau,xi1,xi2,err1,err2"
    tau, xi1, xi2 = (float(v) for v in row.split(",")[:3])
    assert tau == 1.0 and abs(xi1) < 1e-12 and xi2 == pytest.approx(0.5, rel=1e-12)


def test_bcf_beyond_direct_range():
    code, _, err = run(["bcf", "--tau", "2e4"])
    assert code == EXIT_CONFIG and "asympt" in err


def test_asympt_law_columns():
    code, out, _ = run(["asympt", "--tau-start", "10", "--tau-stop", "100", "--tau-count", "2", "--tau-spacing", "log"])
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0].endswith("law,p,m,term_index")
    assert lines[1].endswith("generic/cascaded-generic,2/3,0/0,0/1")


def test_short_and_moments():
    code, out, _ = run(["short", "--tau", "0.01"])
    assert code == EXIT_OK and float(out.splitlines()[1].split(",")[2]) == pytest.approx(0.02)
    code, out, _ = run(["moments", "--T", "1"])
    values = dict(line.split(",") for line in out.strip().splitlines()[1:])
    assert float(values["m1"]) == pytest.approx(2.0)
    assert float(values["c1_0"]) == pytest.approx(math.pi**2 / 3 - 1)


def test_mellin_output(tmp_path):
    out = tmp_path / "m.csv"
    assert main(["mellin", "--re-s", "0.5", "--out", str(out)]) == EXIT_OK
    assert out.read_text().startswith("re_s,im_s,re_val,im_val,abs_val\n")
    assert "pass = true" in (tmp_path / "m.csv.fit").read_text()


def test_figures_three(tmp_path):
    out = tmp_path / "f3.csv"
    assert main(["figures", "3", "--points", "5", "--out", str(out)]) == EXIT_OK
    rows = out.read_text().strip().splitlines()[1:]
    assert sorted({r.split(",")[1] for r in rows}) == list("abcdefg")
    assert (tmp_path / "f3.csv.meta").exists()


def test_idempotent(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["bcf", "--alpha", "1.5", "--n", "2", "--tau-start", "0.1", "--tau-stop", "20", "--tau-count", "7"]
    main(argv + ["--out", str(a)])
    main(argv + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_validate_ohmic():
    code, out, _ = run(["validate", "--suite", "ohmic"])
    assert code == EXIT_OK
    assert len(out.strip().splitlines()) == 3


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# half-Ohmic\nalpha = 0.5\nl = 2   # cutoff\ntau = 1, 2\n")
    rc = make_config(["bcf", "--config", str(cfg), "--l", "3"])
    assert (rc.alpha, rc.l, list(rc.tau)) == (0.5, 3.0, [1.0, 2.0])


def test_config_errors():
    assert run(["bcf", "--bogus"])[0] == EXIT_CONFIG
    assert run(["figures"])[0] == EXIT_CONFIG
    assert run(["figures", "9"])[0] == EXIT_CONFIG
    assert run(["bcf", "--alpha", "-1", "--tau", "1"])[0] == EXIT_CONFIG
    assert run(["bcf"])[0] == EXIT_CONFIG
    with pytest.raises(ConfigError):
        parse_config_text("no equals sign")
    with pytest.raises(ConfigError):
        RunConfig(command="bcf", tau_count=0)
    with pytest.raises(ConfigError):
        RunConfig(command="bcf", tau_spacing="log", tau_start=0.0)


def test_chi0_message(tmp_path):
    table = tmp_path / "t.csv"
    table.write_text("nu,omega\n0.1,0.1\n1,0.5\n5,0.01\n")
    code, _, err = run(["short", "--table", str(table), "--chi0", "1.5", "--tau", "0.01"])
    assert code == EXIT_CONFIG and "chi0" in err


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
def test_numerical_failure_exit():
    code, _, err = run(["bcf", "--tau", "3", "--abs-tol", "1e-300", "--rel-tol", "1e-300"])
    assert code == EXIT_NUMERIC and "numerical failure" in err


def test_fmt_seventeen_digits():
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt("x") == "x"
