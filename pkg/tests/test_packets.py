import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swave.analytic import initial_radius
from swave.errors import DomainError, GridTooSmall
from swave.packets import (
    Family,
    WavePacketSpec,
    initial_mean_radius,
    normalization_constant,
    radial_density,
    reduced_wavefunction,
    solid_angle,
)
from swave.states import RadialGrid


def test_solid_angle_low_dimensions():
    assert solid_angle(1) == pytest.approx(2.0)
    assert solid_angle(2) == pytest.approx(2 * math.pi)
    assert solid_angle(3) == pytest.approx(4 * math.pi)
    assert solid_angle(4) == pytest.approx(2 * math.pi**2)


def test_spec_validation():
    with pytest.raises(DomainError):
        WavePacketSpec(delta_r=0.0)
    with pytest.raises(DomainError):
        WavePacketSpec(dimension=0)
    with pytest.raises(DomainError):
        WavePacketSpec(gamma=-1.0)
    with pytest.raises(DomainError):
        WavePacketSpec(Family.DISPLACED, rho=-0.5)
    assert WavePacketSpec("sine").family is Family.SINE


def test_normalization_only_for_power():
    with pytest.raises(DomainError):
        normalization_constant(WavePacketSpec(Family.SINE))


@pytest.mark.parametrize("family,extra", [
    (Family.POWER, dict(gamma=2.0)),
    (Family.POWER, dict(gamma=0.0)),
    (Family.POWER, dict(gamma=3.5)),
    (Family.SINE, {}),
    (Family.DISPLACED, dict(rho=1.5, delta_r=0.4)),
])
@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_density_integrates_to_one(family, extra, n):
    spec = WavePacketSpec(family, dimension=n, **extra)
    f = lambda r: float(radial_density(spec, float(r)))
    total = mpmath.quad(f, [0, 1, 2, 4, 8, mpmath.inf])
    assert float(total) == pytest.approx(1.0, abs=1e-9)


def test_sine_second_moment_2d():
    # <r^2> = int r^3 sin^2(r^2) e^-r^2 / int r sin^2(r^2) e^-r^2 = (7/25) / (1/5)
    spec = WavePacketSpec(Family.SINE, dimension=2)
    m2 = mpmath.quad(lambda r: r * r * float(radial_density(spec, float(r))),
                     [0, 1, 2, 4, 8, mpmath.inf])
    assert float(m2) == pytest.approx(7 / 5, rel=1e-9)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("gamma", [0.0, 1.5, 2.0, 3.0])
def test_initial_radius_matches_closed_form(n, gamma):
    spec = WavePacketSpec(Family.POWER, gamma, 1.3, 0.0, n)
    assert initial_mean_radius(spec) == pytest.approx(initial_radius(n, gamma, 1.3),
                                                      rel=1e-11)


def test_reduced_wavefunction_normalized():
    spec = WavePacketSpec(Family.POWER, 2.0, 1.0, 0.0, 2)
    grid = RadialGrid(20.0, 2000)
    st0 = reduced_wavefunction(spec, grid)
    assert st0.norm == pytest.approx(1.0, abs=1e-14)
    assert np.all(st0.u.real >= 0)
    assert np.all(st0.u.imag == 0)


def test_sine_keeps_its_sign():
    spec = WavePacketSpec(Family.SINE, dimension=2)
    u = reduced_wavefunction(spec, RadialGrid(20.0, 4000)).u.real
    assert u.min() < -1e-3 and u.max() > 1e-3


def test_displaced_independent_of_dimension():
    grid = RadialGrid(8.0, 1000)
    us = [reduced_wavefunction(WavePacketSpec(Family.DISPLACED, 0.0, 0.4, 1.5, n), grid).u
          for n in (2, 3)]
    np.testing.assert_array_equal(us[0], us[1])


def test_grid_too_small():
    with pytest.raises(GridTooSmall):
        reduced_wavefunction(WavePacketSpec(), RadialGrid(3.0, 300))


def test_density_rejects_negative_r():
    with pytest.raises(DomainError):
        radial_density(WavePacketSpec(), -1.0)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(0.0, 4.0), st.integers(1, 5))
def test_power_density_scales_with_width(d, gamma, n):
    # W_d(r) = W_1(r / d) / d
    spec = WavePacketSpec(Family.POWER, gamma, d, 0.0, n)
    unit = WavePacketSpec(Family.POWER, gamma, 1.0, 0.0, n)
    r = np.array([0.2, 0.9, 1.7, 3.1]) * d
    np.testing.assert_allclose(radial_density(spec, r), radial_density(unit, r / d) / d,
                               rtol=1e-12)
