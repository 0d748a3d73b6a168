"""Closed-form moment evolution of free s-wave packets.

Times are the dimensionless tau = t / dr^2 (hbar = M = 1).  Unless stated
otherwise radii are returned in units of the initial mean radius r0 and
momenta in units of the asymptotic momentum p_inf ("scaled" units).

The gamma = 2 shell in N dimensions has

    <r>(tau) / r0 = (1 + tau^2 / a) / sqrt(1 + tau^2),  a = 1 + 4N / (N^2 + 3)

and implodes before exploding exactly when a > 2, i.e. only for N = 2.
For a general power r^gamma in two dimensions the mean radius is a
one-dimensional integral over a confluent hypergeometric function, see
mean_radius_general_gamma_2d.
"""

import math
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError
from .specialfn import gamma_fn, hyp1f1, integrate_semi_infinite
from .states import MomentSeries, Provenance, Units

__all__ = [
    "a_coeff",
    "initial_radius",
    "initial_radius_gamma2",
    "mean_radius_gamma2",
    "mean_momentum_gamma2",
    "p_infinity",
    "implosion_predicate",
    "tau_min",
    "r_min_ratio",
    "short_time_coefficient",
    "mean_radius_general_gamma_2d",
    "general_gamma_integral",
    "analytic_series",
    "locate_minimum",
]


def _check_dim(n):
    if int(n) != n or n < 1:
        raise DomainError("dimension must be an integer >= 1")
    return int(n)


def a_coeff(n, exact=False):
    """a = 1 + 4N / (N^2 + 3); a Fraction when ``exact``."""
    n = _check_dim(n)
    a = 1 + Fraction(4 * n, n * n + 3)
    return a if exact else float(a)


def initial_radius(n, gamma, delta_r=1.0):
    """Initial mean radius Gamma(gamma + (N+1)/2) / Gamma(gamma + N/2) * dr of the
    packet r^gamma exp(-r^2 / 2 dr^2)."""
    n = _check_dim(n)
    return gamma_fn(gamma + (n + 1) / 2) / gamma_fn(gamma + n / 2) * delta_r


def initial_radius_gamma2(n, delta_r=1.0):
    return initial_radius(n, 2.0, delta_r)


def mean_radius_gamma2(n, tau):
    tau = np.asarray(tau, dtype=float)
    a = a_coeff(n)
    out = (1.0 + tau**2 / a) / np.sqrt(1.0 + tau**2)
    return float(out) if out.ndim == 0 else out


def mean_momentum_gamma2(n, tau):
    """Mean radial momentum in units of p_inf; it is d<r>/dt divided by p_inf."""
    tau = np.asarray(tau, dtype=float)
    a = a_coeff(n)
    out = -tau * (a - 2.0 - tau**2) / (1.0 + tau**2) ** 1.5
    return float(out) if out.ndim == 0 else out


def p_infinity(n, delta_r=1.0):
    """Asymptotic mean radial momentum r0 / (a dr^2) in natural units."""
    if not delta_r > 0:
        raise DomainError("delta_r must be positive")
    return initial_radius_gamma2(n, delta_r) / (a_coeff(n) * delta_r**2)


def implosion_predicate(n):
    n = _check_dim(n)
    return (n - 1) * (n - 3) < 0


def tau_min(n):
    """Time of the smallest mean radius, or None when the shell never contracts."""
    a = a_coeff(n, exact=True)
    if a <= 2:
        return None
    return math.sqrt(a - 2)


def r_min_ratio(n):
    t = tau_min(n)
    return None if t is None else mean_radius_gamma2(n, t)


def short_time_coefficient(n):
    """Coefficient c in <r>/r0 = 1 + c tau^2 + O(tau^4)."""
    return 1.0 / a_coeff(n) - 0.5


# ---------------------------------------------------------------------------
# general power in two dimensions
# ---------------------------------------------------------------------------


def _general_prefactor(g, tau):
    # 2^(g+1) Gamma((g+2)/2)^2 / Gamma(g + 3/2) * tau^g / (1+tau^2)^((g+2)/2)
    log_c = (
        (g + 1) * math.log(2.0)
        + 2 * math.lgamma((g + 2) / 2)
        - math.lgamma(g + 1.5)
        + g * math.log(tau)
        - 0.5 * (g + 2) * math.log1p(tau * tau)
    )
    return math.exp(log_c)


def general_gamma_integral(gamma, tau, tol=1e-10, kummer=None):
    """I = int_0^inf xi^2 exp(-xi^2/(1+tau^2)) |1F1(-gamma/2; 1; z)|^2 dxi
    with z = i xi^2 / (2 tau (1 + i tau)).

    Since Re z = xi^2 / (2 (1 + tau^2)) the Gaussian equals |exp(-z)|^2, so the
    integrand is evaluated as |exp(-z) 1F1|^2 without overflow.  ``kummer``
    is passed through to hyp1f1 and selects the evaluation route.
    Returns a QuadratureResult.
    """
    a = -0.5 * gamma
    w = 1j / (2.0 * tau * (1.0 + 1j * tau))
    s = 1.0 + tau * tau

    def f(xi):
        v = hyp1f1(a, 1.0, w * xi * xi, kummer=kummer, scaled=True)
        return xi * xi * (v.real**2 + v.imag**2)

    return integrate_semi_infinite(
        f, tol, scale=math.sqrt(s), phase_rate=lambda xi: xi / (tau * s)
    )


def mean_radius_general_gamma_2d(gamma, tau, tol=1e-10, kummer=None):
    """Mean radius of the 2D packet r^gamma exp(-r^2 / 2 dr^2) at time tau, in
    units of its own initial mean radius Gamma(gamma + 3/2) / Gamma(gamma + 1) dr.

    The result tends to 1 as tau -> 0+ and reduces to mean_radius_gamma2(2, tau)
    at gamma = 2.  ``tol`` bounds the absolute error of the returned ratio.
    """
    if not gamma > 1:
        raise DomainError("gamma must be > 1")
    if not tau > 0:
        raise DomainError("tau must be > 0")
    if not tol > 0:
        raise DomainError("tol must be positive")
    pref = _general_prefactor(gamma, tau)
    res = general_gamma_integral(gamma, tau, tol / pref, kummer)
    return pref * res.value


def analytic_series(n, taus, delta_r=1.0, units=Units.SCALED) -> MomentSeries:
    """Sampled gamma = 2 trajectory for dimension N."""
    taus = np.asarray(taus, dtype=float)
    r = mean_radius_gamma2(n, taus)
    p = mean_momentum_gamma2(n, taus)
    r0 = initial_radius_gamma2(n, delta_r)
    pinf = p_infinity(n, delta_r)
    units = Units(units)
    if units is Units.NATURAL:
        r, p = r * r0, p * pinf
    return MomentSeries.from_arrays(
        taus, np.atleast_1d(r), np.atleast_1d(p), Provenance.ANALYTIC,
        units=units, r0=r0, p_inf=pinf,
    )


def locate_minimum(func, lo=1e-3, hi=3.0, tol=1e-6, n_scan=48):
    """First interior minimum of ``func`` on [lo, hi].

    A uniform scan brackets the first local minimum, then golden-section
    search refines it to ``tol`` in tau.  Returns (tau, value) or None when
    the scan finds no interior minimum.
    """
    xs = np.linspace(lo, hi, n_scan + 1)
    ys = np.array([func(x) for x in xs])
    for i in range(1, n_scan):
        if ys[i] < ys[i - 1] and ys[i] <= ys[i + 1]:
            bracket = (xs[i - 1], xs[i], xs[i + 1])
            break
    else:
        return None
    res = minimize_scalar(
        func, bracket=bracket, method="golden",
        options={"xtol": tol / max(abs(bracket[1]), 1e-12)},
    )
    return float(res.x), float(res.fun)
