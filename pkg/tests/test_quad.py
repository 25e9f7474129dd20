import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from logbath.errors import DomainError, TauRangeError, UnsupportedKindError
from logbath.quad import QuadConfig, bcf_numeric, coth, de_fourier, fourier_tail_oracle, moment
from logbath.sd import make_log_ohmic

OHMIC = make_log_ohmic(1, 1, 1, 0)

# reference values from 30-digit mpmath quadrature
FROZEN = [
    ((1, 2.5, 1, 1), 0.0, 3.0, 0.0607779317852398858962574537956, 0.0527802456178082941226550692079),
    ((1, 0.5, 1, 0), 1.0, 2.0, 1.98884167652678309897960001611, None),
]


@pytest.mark.parametrize("params,T,tau,xi1,xi2", FROZEN)
def test_frozen_values(params, T, tau, xi1, xi2):
    s = bcf_numeric(make_log_ohmic(*params), T, [tau])[0]
    assert s.xi1 == pytest.approx(xi1, rel=1e-9)
    if xi2 is not None:
        assert s.xi2 == pytest.approx(xi2, rel=1e-9)


@pytest.mark.parametrize("tau", [1e-3, 0.3, 1.0, 7.0, 50.0])
def test_ohmic_closed_form(tau):
    s = bcf_numeric(OHMIC, 0.0, [tau])[0]
    z = 1.0 / (1.0 - 1j * tau) ** 2
    assert abs(s.xi1 - z.real) < 1e-10
    assert abs(s.xi2 - z.imag) < 1e-10


def test_tau_one_row():
    s = bcf_numeric(OHMIC, 0.0, [1.0])[0]
    assert s.xi1 == pytest.approx(0.0, abs=1e-12)
    assert s.xi2 == pytest.approx(0.5, rel=1e-12)


def test_tau_zero():
    s = bcf_numeric(OHMIC, 1.0, [0.0])[0]
    assert s.xi2 == 0.0
    assert s.xi1 == pytest.approx(math.pi**2 / 3 - 1, rel=1e-10)


def test_moments():
    assert [moment(OHMIC, p, 0.0) for p in (0, 1, 2)] == pytest.approx([1, 2, 6], rel=1e-10)
    assert moment(OHMIC, 0, 1.0) == pytest.approx(math.pi**2 / 3 - 1, rel=1e-10)
    with pytest.raises(DomainError):
        moment(OHMIC, 3, 0.0)


def test_no_silent_regime_crossing():
    with pytest.raises(TauRangeError, match="asympt"):
        bcf_numeric(OHMIC, 0.0, [2e4])


def test_negative_inputs():
    with pytest.raises(DomainError):
        bcf_numeric(OHMIC, 0.0, [-1.0])
    with pytest.raises(DomainError):
        bcf_numeric(OHMIC, -1.0, [1.0])


def test_oracle_closed_form():
    z = fourier_tail_oracle(OHMIC, 10.0)
    assert z.real == pytest.approx(-99 / 101**2, rel=1e-10)
    assert z.imag == pytest.approx(20 / 101**2, rel=1e-10)


@pytest.mark.parametrize("tau", [5.0, 50.0, 500.0, 5000.0])
def test_oracle_agrees_with_quadrature_n2(tau):
    sd = make_log_ohmic(1, 1.5, 1, 2)
    z = fourier_tail_oracle(sd, tau)
    s = bcf_numeric(sd, 0.0, [tau])[0]
    scale = abs(z)
    assert abs(s.xi1 - z.real) <= 1e-7 * scale
    assert abs(s.xi2 - z.imag) <= 1e-7 * scale


def test_oracle_restrictions():
    with pytest.raises(UnsupportedKindError):
        fourier_tail_oracle(make_log_ohmic(1, 1, 1, 1), 10.0)
    with pytest.raises(DomainError):
        fourier_tail_oracle(make_log_ohmic(1, 1, 3, 0), 2.0)


def test_de_rule_simple_transform():
    val, _ = de_fourier(lambda x: np.exp(-x), 2.0, "cos")
    assert val == pytest.approx(0.2, rel=1e-12)
    val, _ = de_fourier(lambda x: np.exp(-x), 2.0, "sin")
    assert val == pytest.approx(0.4, rel=1e-12)


def test_coth_small_argument():
    assert coth(1e-6) == pytest.approx(1e6 + 1e-6 / 3, rel=1e-15)


def test_config_validation():
    with pytest.raises(DomainError):
        QuadConfig(abs_tol=0)


def test_parallel_matches_serial(monkeypatch):
    taus = [0.5, 1.5, 3.0]
    serial = bcf_numeric(OHMIC, 0.0, taus)
    monkeypatch.setenv("LOGBATH_THREADS", "2")
    assert bcf_numeric(OHMIC, 0.0, taus) == serial


@settings(max_examples=15, deadline=None)
@given(st.floats(0.3, 3), st.floats(0.5, 3), st.integers(0, 3), st.floats(0.05, 40))
def test_bounded_by_value_at_zero(alpha, l, n, tau):
    sd = make_log_ohmic(1, alpha, l, n)
    s0 = bcf_numeric(sd, 0.0, [0.0])[0]
    s = bcf_numeric(sd, 0.0, [tau])[0]
    assert abs(s.xi1) <= s0.xi1 * (1 + 1e-9)
    assert abs(s.xi2) <= s0.xi1 * (1 + 1e-9)


@settings(max_examples=10, deadline=None)
@given(st.floats(0.1, 10))
def test_linear_in_q(q):
    a = bcf_numeric(make_log_ohmic(q, 1.5, 1, 2), 0.5, [2.0])[0]
    b = bcf_numeric(make_log_ohmic(1, 1.5, 1, 2), 0.5, [2.0])[0]
    assert a.xi1 == pytest.approx(q * b.xi1, rel=1e-9)
    assert a.xi2 == pytest.approx(q * b.xi2, rel=1e-9)
