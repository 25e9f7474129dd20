import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from logbath.asymptotics import (
    C1T,
    C1T0,
    C2,
    NearResonanceWarning,
    bcf_asymptotic,
    branch_coefficient,
    branches,
    full_law_terms,
    gamma_phase_derivatives,
    kink_contribution,
    law_value,
    select_branch,
    short_time,
)
from logbath.errors import DomainError, ExpansionExhaustedError, PreconditionError
from logbath.quad import bcf_numeric
from logbath.sd import (
    FIRST_CLASS,
    SECOND_CLASS,
    ExpansionTerm,
    LowFreqExpansion,
    low_freq_expansion,
    make_log_ohmic,
    make_log_ohmic_real,
    make_tabulated,
)
from logbath.specfun import gamma

OHMIC = make_log_ohmic(1, 1, 1, 0)


def one_term(alpha, n, c=1.0, cls=FIRST_CLASS):
    return LowFreqExpansion(cls, (ExpansionTerm(alpha, n, c),))


# -- branch selection -----------------------------------------------------------


def test_ohmic_cascade():
    b = select_branch(low_freq_expansion(OHMIC), C2)
    assert (b.law, b.used_term_index, b.power, b.logpow) == ("cascaded-generic", 1, 3.0, 0)
    assert b.prefactor == 2.0


def test_generic_thermal_half_ohmic():
    b = select_branch(one_term(0.5, 0), C1T, T=1.0)
    assert (b.law, b.power, b.logpow) == ("generic", 0.5, 0)
    assert b.prefactor == pytest.approx(math.sqrt(2 * math.pi), rel=1e-14)


def test_thermal_prefactor_scales_with_theta():
    b = select_branch(one_term(0.5, 0), C1T, T=0.25)
    assert b.prefactor == pytest.approx(0.25 * math.sqrt(2 * math.pi), rel=1e-14)


def test_resonant_thermal():
    b = select_branch(one_term(3.0, 2), C1T, T=1.0)
    assert (b.law, b.power, b.logpow, b.resonance_ints) == ("resonant", 3.0, 1, (1, 2))
    assert b.prefactor == pytest.approx(math.pi * 2 * (-1) * 2, rel=1e-14)


def test_resonant_c2_and_c10_coefficients():
    b2 = select_branch(one_term(1.0, 1), C2)
    assert branch_coefficient(b2, 1.0, 0.0) == pytest.approx(math.pi / 2, abs=1e-15)
    b10 = select_branch(one_term(2.0, 1), C1T0)
    assert branch_coefficient(b10, 1.0, 0.0) == pytest.approx(-math.pi, abs=1e-15)
    assert b10.resonance_ints == (1, 1)


def test_even_integer_is_generic_for_c2():
    b = select_branch(one_term(2.0, 3), C2)
    assert b.law == "generic"
    assert b.prefactor == pytest.approx(math.cos(math.pi) * gamma(3.0))


def test_odd_integer_is_generic_for_cold_c1():
    b = select_branch(one_term(1.0, 2), C1T0)
    assert (b.law, b.power, b.logpow) == ("generic", 2.0, 2)
    assert b.prefactor == pytest.approx(-1.0)


def test_cascaded_resonant():
    exp = LowFreqExpansion(FIRST_CLASS, (ExpansionTerm(1.0, 0, 1.0), ExpansionTerm(3.0, 2, 0.5)))
    b = select_branch(exp, C2)
    assert (b.law, b.used_term_index, b.power, b.logpow) == ("cascaded-resonant", 1, 4.0, 1)


def test_exhausted():
    with pytest.raises(ExpansionExhaustedError):
        select_branch(one_term(3.0, 0), C2)


def test_thermal_part_needs_temperature():
    with pytest.raises(DomainError):
        select_branch(one_term(0.5, 0), C1T, T=0.0)


def test_near_resonance_warning():
    with pytest.warns(NearResonanceWarning):
        select_branch(one_term(1.0 + 1e-7, 0), C2)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        select_branch(one_term(1.0 + 1e-3, 0), C2)


def test_integer_tolerance():
    b = select_branch(one_term(1.0 + 1e-10, 1), C2)
    assert b.law == "resonant"


def test_second_class_two_term():
    sd = make_log_ohmic_real(1, 0.5, 1, 0.5)
    b, _ = branches(sd, 1.0)
    assert b.law == "second-class-two-term"
    assert (b.power, b.logpow) == (0.5, 0.5)
    assert b.prefactor == pytest.approx(math.sqrt(2 * math.pi), rel=1e-14)
    assert b.secondary.logpow == pytest.approx(-0.5)
    tau = math.exp(10)
    lead = math.sqrt(2 * math.pi) * math.exp(-5) * math.sqrt(10)
    assert b.leading(tau) == pytest.approx(lead, rel=1e-13)


def test_second_class_beta_one_c10_exponent():
    # beta = 1 at an even alpha: the surviving term keeps the 1 + alpha power
    b = select_branch(one_term(2.0, 1.0, cls=SECOND_CLASS), C1T0)
    assert b.power == 3.0
    assert b.prefactor == 0.0
    assert b.secondary.logpow == 0.0
    assert b.secondary.coeff == pytest.approx(math.pi * gamma(3.0) * -1 / 2)


def test_temperature_transition():
    sd = make_log_ohmic(1, 0.5, 1, 0)
    hot, _ = branches(sd, 1.0)
    cold, _ = branches(sd, 0.0)
    assert cold.power - hot.power == 1.0


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 6), st.integers(0, 5), st.floats(0.01, 100), st.sampled_from([C1T0, C2]))
def test_prefactor_linear_in_coefficients(alpha, n, c, part):
    exp = LowFreqExpansion(FIRST_CLASS, (ExpansionTerm(alpha, n, 1.0), ExpansionTerm(alpha + 1, n, -0.5)))
    scaled = LowFreqExpansion(FIRST_CLASS, tuple(ExpansionTerm(t.power, t.logpow, c * t.coeff) for t in exp.terms))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NearResonanceWarning)
        a, b = select_branch(exp, part), select_branch(scaled, part)
    assert (a.law, a.power, a.logpow, a.used_term_index) == (b.law, b.power, b.logpow, b.used_term_index)
    assert b.prefactor == pytest.approx(c * a.prefactor, rel=1e-12, abs=1e-300)
    assert b.power > 0


# -- evaluators -------------------------------------------------------------------


def test_ohmic_leading_laws_at_100():
    s = bcf_asymptotic(OHMIC, 0.0, [100.0], order="leading")[0]
    assert s.xi2 == pytest.approx(2e-6, rel=1e-14)
    assert s.xi1 == pytest.approx(-1e-4, rel=1e-14)
    assert s.xi2 == pytest.approx(200 / 10001**2, rel=1e-3)
    assert s.xi1 == pytest.approx((1 - 1e4) / 10001**2, rel=1e-3)


def test_asymptotic_needs_tau_above_e():
    with pytest.raises(PreconditionError):
        bcf_asymptotic(OHMIC, 0.0, [2.0])
    with pytest.raises(DomainError):
        bcf_asymptotic(OHMIC, 0.0, [10.0], order="everything")


def test_law_value_domain():
    b = select_branch(one_term(0.5, 2), C2)
    with pytest.raises(DomainError):
        law_value(b, [1.0])
    assert law_value(b, [1.5])[0] > 0


@pytest.mark.parametrize("alpha", [0.5, 2.5])
@pytest.mark.parametrize("l", [1.0, 2.0])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_full_order_matches_quadrature(alpha, l, n):
    sd = make_log_ohmic(1, alpha, l, n)
    num = bcf_numeric(sd, 0.0, [1e3])[0]
    asy = bcf_asymptotic(sd, 0.0, [1e3])[0]
    assert num.xi1 / asy.xi1 == pytest.approx(1.0, abs=1e-3)
    assert num.xi2 / asy.xi2 == pytest.approx(1.0, abs=1e-3)


@pytest.mark.parametrize("params", [(1, 0.5, 1, 0), (1, 1.5, 1, 2), (1, 2.5, 2, 1)])
def test_full_order_thermal(params):
    sd = make_log_ohmic(*params)
    num = bcf_numeric(sd, 0.7, [2e3])[0]
    asy = bcf_asymptotic(sd, 0.7, [2e3])[0]
    assert num.xi1 / asy.xi1 == pytest.approx(1.0, abs=1e-2)
    assert num.xi2 / asy.xi2 == pytest.approx(1.0, abs=1e-2)


def test_err_estimate_is_next_term():
    s = bcf_asymptotic(OHMIC, 0.0, [100.0], order="leading")[0]
    # the next non-vanishing C2 law comes from -nu^4 / 6: (1/6) Gamma(5) tau^-5 = 4 tau^-5 in size
    assert s.err2 == pytest.approx(4 * 100.0**-5, rel=1e-12)


def test_gamma_phase_derivatives_first_order():
    a = 2.3
    d = gamma_phase_derivatives(a, 2)
    h = 1e-6
    from logbath.specfun import gamma_complex

    G = lambda e: gamma_complex(a + e) * complex(math.cos(math.pi * (a + e) / 2), math.sin(math.pi * (a + e) / 2))
    assert d[1] == pytest.approx((G(h) - G(-h)) / (2 * h), rel=1e-8)


def test_full_terms_sorted_by_dominance():
    terms = full_law_terms(low_freq_expansion(make_log_ohmic(1, 0.5, 1, 2)), C2)
    keys = [(t.power, -t.logpow) for t in terms]
    assert keys == sorted(keys)
    assert terms[0].logpow == 2


def test_kink_only_for_odd_n():
    assert kink_contribution(make_log_ohmic(1, 2.5, 1, 2), 0.0, 100.0, "xi1") == 0.0
    assert kink_contribution(make_log_ohmic(1, 2.5, 1, 1), 0.0, 100.0, "xi1") != 0.0


def test_tabulated_with_declared_expansion():
    nu = np.geomspace(1e-3, 30, 300)
    exp = LowFreqExpansion(FIRST_CLASS, (ExpansionTerm(1.0, 0, 1.0), ExpansionTerm(2.0, 0, -1.0)))
    sd = make_tabulated(nu, nu * np.exp(-nu), expansion=exp)
    b1, b2 = branches(sd, 0.0)
    assert (b2.power, b2.prefactor) == (3.0, 2.0)


# -- short times --------------------------------------------------------------------


def test_short_time_ohmic():
    s = short_time(OHMIC, 0.0, [0.01, 0.0])
    assert s[0].xi1 == pytest.approx(1 - 3e-4, rel=1e-13)
    assert s[0].xi2 == pytest.approx(0.02, rel=1e-13)
    assert (s[1].xi1, s[1].xi2) == (pytest.approx(1.0), 0.0)


def test_short_time_chi0_precondition():
    nu = np.geomspace(1e-3, 30, 50)
    sd = make_tabulated(nu, nu * np.exp(-nu), chi0=1.5)
    with pytest.raises(PreconditionError, match="chi0"):
        short_time(sd, 0.0, [0.01])


@pytest.mark.parametrize("params", [(1, 1, 1, 0), (1, 2, 1.2, 6), (1, 0.3, 0.9, 4), (1, 3.4, 0.3, 2)])
def test_short_time_matches_quadrature(params):
    sd = make_log_ohmic(*params)
    taus = [1e-4, 1e-3]
    for a, b in zip(short_time(sd, 0.0, taus), bcf_numeric(sd, 0.0, taus)):
        assert a.xi1 == pytest.approx(b.xi1, rel=1e-3)
        assert a.xi2 == pytest.approx(b.xi2, rel=1e-3)
