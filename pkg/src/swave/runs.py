"""Experiment recipes shared by the command line and the acceptance checks."""

import math

import numpy as np

from .analytic import locate_minimum, mean_radius_general_gamma_2d
from .errors import DomainError
from .evolve import DT_FACTOR, crank_nicolson_evolve, find_implosion, spectral_series
from .packets import Family, WavePacketSpec, reduced_wavefunction
from .states import RadialGrid

__all__ = [
    "DEFAULT_N_POINTS",
    "default_tau_max",
    "packet_grid",
    "evolve_packet",
    "general_gamma_minimum",
    "spectral_gamma_minimum",
]

DEFAULT_N_POINTS = 4096

# long enough to pass the minimum, short enough to stay clear of the default
# box edge (the displaced packet reaches r_max = 8 dr near tau = 1.9)
_TAU_MAX = {Family.POWER: 2.0, Family.SINE: 3.0, Family.DISPLACED: 1.6}


def default_tau_max(family):
    return _TAU_MAX[Family(family)]


def packet_grid(spec: WavePacketSpec, r_max=None, n_points=DEFAULT_N_POINTS):
    rho = spec.rho if spec.family is Family.DISPLACED else 0.0
    return RadialGrid.for_packet(spec.delta_r, rho, n_points, r_max)


def evolve_packet(spec: WavePacketSpec, tau_max, samples, method="cn", grid=None,
                  dt=None):
    """Moments on the uniform tau grid linspace(0, tau_max, samples).

    For Crank-Nicolson the step is shrunk below ``dt`` (natural units;
    default the accuracy limit DT_FACTOR * spacing^2) so that every sample
    falls on a step.  Solver errors propagate with their partial series
    attached.
    """
    if samples < 2:
        raise DomainError("need at least two samples")
    grid = packet_grid(spec) if grid is None else grid
    initial = reduced_wavefunction(spec, grid)
    if method == "spectral":
        return spectral_series(initial, np.linspace(0.0, tau_max, samples))
    if method != "cn":
        raise DomainError(f"unknown method {method!r}")
    if dt is None:
        dt = DT_FACTOR * grid.spacing**2
    t_max = tau_max * spec.delta_r**2
    intervals = samples - 1
    per_sample = max(1, math.ceil(t_max / (dt * intervals)))
    n_steps = per_sample * intervals
    return crank_nicolson_evolve(initial, t_max / n_steps, n_steps, per_sample)


def general_gamma_minimum(gamma, tol=1e-10, lo=1e-3, hi=3.0, xtol=1e-6):
    """(tau_min, r_min_ratio) of the 2D power packet from the quadrature
    formula, or None when it never contracts on [lo, hi]."""
    return locate_minimum(
        lambda t: mean_radius_general_gamma_2d(gamma, t, tol), lo, hi, xtol
    )


def spectral_gamma_minimum(gamma, tau_max=1.5, samples=301, grid=None):
    """(tau_min, r_min_ratio) of the 2D power packet from exact free
    propagation, or None."""
    spec = WavePacketSpec(Family.POWER, gamma, 1.0, 0.0, 2)
    series = evolve_packet(spec, tau_max, samples, "spectral", grid)
    return find_implosion(series)
