import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swave.errors import DomainError, ToleranceNotMet
from swave.specialfn import (
    bessel_j0,
    bessel_j0_zeros,
    bessel_j1,
    gamma_fn,
    hyp1f1,
    integrate_semi_infinite,
    rgamma,
)

# gamma ------------------------------------------------------------------------

def test_gamma_small_values():
    assert gamma_fn(3) == pytest.approx(2.0, rel=1e-15)
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert gamma_fn(3.5) == pytest.approx(15 * math.sqrt(math.pi) / 8, rel=1e-13)


@pytest.mark.parametrize("x", np.linspace(0.5, 30.0, 40))
def test_gamma_against_mpmath(x):
    assert gamma_fn(x) == pytest.approx(float(mpmath.gamma(x)), rel=1e-12)


@given(st.floats(0.5, 20.0))
def test_gamma_recurrence(x):
    assert gamma_fn(x + 1) == pytest.approx(x * gamma_fn(x), rel=1e-12)


def test_gamma_domain():
    with pytest.raises(DomainError):
        gamma_fn(0.0)
    with pytest.raises(DomainError):
        gamma_fn(-1.5)


def test_rgamma_is_reciprocal():
    for x in (0.7, 2.5, 11.0):
        assert rgamma(x) * gamma_fn(x) == pytest.approx(1.0, rel=1e-14)


# 1F1 ------------------------------------------------------------------------

def test_hyp1f1_trivial_cases():
    assert hyp1f1(-0.7, 1.0, 0.0) == 1.0
    assert hyp1f1(0.0, 1.0, 3 + 4j) == pytest.approx(1.0)
    z = 2.5 - 7j
    assert hyp1f1(-1.0, 1.0, z) == pytest.approx(1 - z, rel=1e-13)


def test_hyp1f1_against_fifty_term_series():
    # independent brute-force sum of the Kummer series at 50 digits
    with mpmath.workdps(50):
        a, z = mpmath.mpf(-0.5), mpmath.mpc(0, 2)
        term = mpmath.mpc(1)
        total = mpmath.mpc(1)
        for k in range(50):
            term *= (a + k) / ((1 + k) * (k + 1)) * z
            total += term
    got = hyp1f1(-0.5, 1.0, 2j)
    assert abs(got - complex(total)) <= 1e-12 * abs(complex(total))


@pytest.mark.parametrize("gamma", [1.05, 1.5, 2.0, 3.0, 4.5, 6.0])
@pytest.mark.parametrize("mod", [0.3, 4.0, 17.0, 60.0, 199.0])
@pytest.mark.parametrize("phi", [math.pi / 2, -math.pi / 2, math.pi / 2 - 0.2, 2.0])
def test_hyp1f1_against_mpmath(gamma, mod, phi):
    a = -(gamma - 1) / 2
    z = mod * complex(math.cos(phi), math.sin(phi))
    ref = complex(mpmath.hyp1f1(a, 1, z))
    got = hyp1f1(a, 1.0, z)
    assert abs(got - ref) <= 1e-9 * abs(ref)


@settings(max_examples=200, deadline=None)
@given(st.floats(1.0001, 6.0), st.floats(0.0, 200.0), st.floats(-0.3, 0.3),
       st.booleans())
def test_kummer_transformation(gamma, mod, dphi, upper):
    a = -(gamma - 1) / 2
    phi = (math.pi / 2 if upper else -math.pi / 2) + dphi
    z = mod * complex(math.cos(phi), math.sin(phi))
    direct = hyp1f1(a, 1.0, z, kummer=False)
    flipped = hyp1f1(a, 1.0, z, kummer=True)
    assert abs(direct - flipped) <= 1e-8 * abs(direct)


def test_hyp1f1_scaled_matches_unscaled():
    z = np.array([3 + 40j, 50 - 2j, -30 + 5j])
    plain = hyp1f1(-1.5, 1.0, z)
    scaled = hyp1f1(-1.5, 1.0, z, scaled=True)
    np.testing.assert_allclose(scaled, np.exp(-z) * plain, rtol=1e-10)


def test_hyp1f1_vectorized_matches_scalar():
    z = np.linspace(0.1, 150, 7) * 1j
    vec = hyp1f1(-1.0 / 3, 1.0, z)
    for zi, vi in zip(z, vec):
        assert vi == pytest.approx(hyp1f1(-1.0 / 3, 1.0, zi), rel=1e-15)


def test_hyp1f1_rejects_bad_b():
    with pytest.raises(DomainError):
        hyp1f1(0.5, -2.0, 1j)


# Bessel ---------------------------------------------------------------------

def test_j0_small_values():
    assert bessel_j0(0.0) == 1.0
    assert abs(bessel_j0(2.404825557695773)) <= 1e-9


def test_j0_at_one_against_taylor():
    s = sum((-1) ** k / math.factorial(k) ** 2 * 0.25**k for k in range(30))
    assert bessel_j0(1.0) == pytest.approx(s, abs=1e-14)


@pytest.mark.parametrize("x", [0.01, 0.5, 3.0, 7.9, 8.1, 12.5, 25.0, 99.0, 850.0, 9999.0])
def test_j0_j1_against_mpmath(x):
    assert abs(bessel_j0(x) - float(mpmath.besselj(0, x))) <= 1e-10
    assert abs(bessel_j1(x) - float(mpmath.besselj(1, x))) <= 1e-10


@given(st.floats(0.5, 1e4))
def test_j0_ode_residual(x):
    h = 1e-3
    jm, j0, jp = bessel_j0(np.array([x - h, x, x + h]))
    d1 = (jp - jm) / (2 * h)
    d2 = (jp - 2 * j0 + jm) / h**2
    assert abs(x * d2 + d1 + x * j0) <= 1e-6 * max(1.0, math.sqrt(x))


def test_j0_zeros():
    z = bessel_j0_zeros(20)
    for k, zk in enumerate(z, 1):
        assert zk == pytest.approx(float(mpmath.besseljzero(0, k)), abs=1e-11)


def test_j0_domain():
    with pytest.raises(DomainError):
        bessel_j0(-1.0)


# quadrature -------------------------------------------------------------------

def test_gaussian_integrals():
    r = integrate_semi_infinite(lambda x: np.exp(-x * x), 1e-12)
    assert r.value == pytest.approx(math.sqrt(math.pi) / 2, abs=1e-12)
    r = integrate_semi_infinite(lambda x: x * x * np.exp(-x * x), 1e-12)
    assert r.value == pytest.approx(math.sqrt(math.pi) / 4, abs=1e-12)
    assert r.error_estimate <= 1e-12


@pytest.mark.parametrize("n", range(6))
def test_gaussian_moments(n):
    r = integrate_semi_infinite(lambda x: x ** (2 * n) * np.exp(-x * x), 1e-12,
                                scale=1.0 + math.sqrt(n))
    want = gamma_fn(n + 0.5) / 2
    assert r.value == pytest.approx(want, abs=1e-10 * max(want, 1.0))


def test_oscillatory_integrand_two_rules():
    def f(x):
        return x * x * np.exp(-x * x / 2) * np.abs(hyp1f1(-0.5, 1.0, 1j * x * x / 4)) ** 2

    panels = integrate_semi_infinite(f, 1e-11, scale=2.0, phase_rate=lambda x: x / 2)
    # second rule: plain composite Gauss-Legendre on [0, 20]
    xg, wg = np.polynomial.legendre.leggauss(400)
    x = 10.0 * (xg + 1.0)
    legendre = 10.0 * np.sum(wg * f(x))
    assert panels.value == pytest.approx(legendre, abs=1e-8)


def test_quadrature_complex_integrand():
    r = integrate_semi_infinite(lambda x: np.exp(-x * x + 2j * x), 1e-12,
                                phase_rate=lambda x: 2.0)
    want = complex(mpmath.quad(lambda x: mpmath.exp(-x * x + 2j * x), [0, mpmath.inf]))
    assert abs(r.value - want) <= 1e-11


def test_quadrature_budget_error_carries_estimate():
    with pytest.raises(ToleranceNotMet) as info:
        integrate_semi_infinite(lambda x: np.sin(1e3 * x) * np.exp(-x), 1e-14, max_evals=500)
    assert info.value.result is not None


def test_quadrature_rejects_bad_tol():
    with pytest.raises(DomainError):
        integrate_semi_infinite(lambda x: np.exp(-x), 0.0)
