import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swave import analytic
from swave.errors import DomainError
from swave.states import Units

DIMS = range(1, 7)


def test_a_coeff_exact():
    assert analytic.a_coeff(2, exact=True) == Fraction(15, 7)
    assert analytic.a_coeff(3, exact=True) == 2
    assert analytic.a_coeff(1, exact=True) == 2
    assert analytic.a_coeff(2) == pytest.approx(15 / 7, abs=1e-15)


def test_minimum_constants():
    assert analytic.tau_min(2) == pytest.approx(1 / math.sqrt(7), abs=1e-12)
    assert analytic.r_min_ratio(2) == pytest.approx(math.sqrt(224 / 225), abs=1e-12)
    assert f"{analytic.r_min_ratio(2):.4f}" == "0.9978"
    for n in (1, 3, 4, 5, 6):
        assert analytic.tau_min(n) is None
        assert analytic.r_min_ratio(n) is None


def test_initial_radius_gamma2():
    assert analytic.initial_radius_gamma2(2) == pytest.approx(15 * math.sqrt(math.pi) / 16)
    assert analytic.initial_radius_gamma2(3, 2.0) == pytest.approx(2.0 * 16 / (5 * math.sqrt(math.pi)))


def test_short_time_coefficient():
    assert analytic.short_time_coefficient(2) == pytest.approx(-1 / 30, abs=1e-15)
    assert analytic.short_time_coefficient(3) == 0.0


@pytest.mark.parametrize("n", [2, 3])
def test_short_time_finite_difference(n):
    h = 1e-3
    f = analytic.mean_radius_gamma2
    fd = (f(n, h) - 2 * f(n, 0.0) + f(n, -h)) / h**2
    assert fd == pytest.approx(2 * analytic.short_time_coefficient(n), abs=1e-6)


def test_predicate():
    assert [analytic.implosion_predicate(n) for n in DIMS] == [
        False, True, False, False, False, False]


@pytest.mark.parametrize("n", DIMS)
def test_momentum_sign_dichotomy(n):
    taus = np.linspace(0.0, 5.0, 1000)
    p = analytic.mean_momentum_gamma2(n, taus)
    if analytic.implosion_predicate(n):
        tm = analytic.tau_min(n)
        inner = (taus > 0) & (taus < tm)
        assert np.all(p[inner] < 0)
        assert np.all(p[taus > tm] >= 0)
    else:
        assert np.all(p >= 0)


@pytest.mark.parametrize("n", DIMS)
def test_radius_momentum_consistency(n):
    # d(<r>/r0)/dtau = (<p>/p_inf) / a in scaled units
    h = 1e-4
    taus = np.linspace(h, 5.0, 400)
    f = analytic.mean_radius_gamma2
    fd = (f(n, taus + h) - f(n, taus - h)) / (2 * h)
    p = analytic.mean_momentum_gamma2(n, taus) / analytic.a_coeff(n)
    assert np.max(np.abs(fd - p)) <= 1e-6


@pytest.mark.parametrize("n", DIMS)
def test_linear_growth(n):
    t = 1e3
    assert analytic.mean_radius_gamma2(n, t) / t == pytest.approx(
        1 / analytic.a_coeff(n), abs=1e-5)
    assert analytic.mean_momentum_gamma2(n, t) == pytest.approx(1.0, abs=1e-5)


def test_implosion_then_explosion():
    tm = analytic.tau_min(2)
    later = np.linspace(3 * tm + 1e-6, 10.0, 200)
    assert analytic.r_min_ratio(2) < 1
    assert np.all(analytic.mean_radius_gamma2(2, later) > 1)


@settings(max_examples=50)
@given(st.integers(1, 6), st.floats(0.0, 50.0))
def test_radius_at_least_minimum(n, tau):
    floor = analytic.r_min_ratio(n) or 1.0
    assert analytic.mean_radius_gamma2(n, tau) >= floor - 1e-15


def test_p_infinity_natural_units():
    assert analytic.p_infinity(2, 2.0) == pytest.approx(
        analytic.initial_radius_gamma2(2, 2.0) / (15 / 7 * 4.0))
    with pytest.raises(DomainError):
        analytic.p_infinity(2, 0.0)


def test_analytic_series_units():
    taus = np.linspace(0, 2, 11)
    s = analytic.analytic_series(2, taus, 1.5)
    nat = analytic.analytic_series(2, taus, 1.5, Units.NATURAL)
    np.testing.assert_allclose(nat.mean_r, s.mean_r * analytic.initial_radius_gamma2(2, 1.5))
    np.testing.assert_allclose(nat.to_scaled().mean_r, s.mean_r)


def test_dimension_domain():
    with pytest.raises(DomainError):
        analytic.a_coeff(0)
    with pytest.raises(DomainError):
        analytic.implosion_predicate(2.5)


# general gamma --------------------------------------------------------------

@pytest.mark.parametrize("tau", [0.2, 0.5, 1.0, 2.5])
def test_general_reduces_to_gamma2(tau):
    v = analytic.mean_radius_general_gamma_2d(2.0, tau, 1e-11)
    assert v == pytest.approx(analytic.mean_radius_gamma2(2, tau), abs=1e-9)


def _mp_general(gamma, tau):
    g = mpmath.mpf(gamma)
    t = mpmath.mpf(tau)
    w = 1j / (2 * t * (1 + 1j * t))
    pref = (2 ** (g + 1) * mpmath.gamma((g + 2) / 2) ** 2 / mpmath.gamma(g + 1.5)
            * t**g / (1 + t * t) ** ((g + 2) / 2))

    def f(x):
        z = w * x * x
        return x * x * abs(mpmath.exp(-z) * mpmath.hyp1f1(-g / 2, 1, z)) ** 2

    edges = list(np.linspace(0, 12 * math.sqrt(1 + tau * tau), 40)) + [mpmath.inf]
    return float(pref * mpmath.quad(f, edges))


@pytest.mark.parametrize("gamma,tau", [(1.5, 0.31), (3.0, 0.48), (4.0, 1.2), (2.7, 0.05)])
def test_general_against_mpmath(gamma, tau):
    with mpmath.workdps(20):
        ref = _mp_general(gamma, tau)
    assert analytic.mean_radius_general_gamma_2d(gamma, tau) == pytest.approx(ref, abs=1e-9)


@pytest.mark.parametrize("gamma", [1.5, 3.0, 4.0])
def test_general_short_time_limit(gamma):
    assert analytic.mean_radius_general_gamma_2d(gamma, 1e-3) == pytest.approx(1.0, abs=1e-5)


@settings(max_examples=10, deadline=None)
@given(st.floats(1.1, 5.0), st.floats(0.05, 3.0))
def test_general_kummer_invariance(gamma, tau):
    a = analytic.mean_radius_general_gamma_2d(gamma, tau, 1e-10, kummer=False)
    b = analytic.mean_radius_general_gamma_2d(gamma, tau, 1e-10, kummer=True)
    assert a == pytest.approx(b, abs=1e-8)


def test_general_domain():
    for bad in ((1.0, 0.5), (0.5, 0.5), (2.0, 0.0), (2.0, -1.0)):
        with pytest.raises(DomainError):
            analytic.mean_radius_general_gamma_2d(*bad)
    with pytest.raises(DomainError):
        analytic.mean_radius_general_gamma_2d(2.0, 0.5, tol=0.0)


def test_locate_minimum_on_gamma2():
    t, r = analytic.locate_minimum(lambda x: analytic.mean_radius_gamma2(2, x))
    assert t == pytest.approx(1 / math.sqrt(7), abs=1e-5)
    assert r == pytest.approx(math.sqrt(224 / 225), abs=1e-12)
    assert analytic.locate_minimum(lambda x: analytic.mean_radius_gamma2(3, x)) is None
