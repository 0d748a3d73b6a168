"""Initial s-wave packets: normalization, radial densities, reduced wavefunctions.

Three families are supported:

* ``power``: Phi(r) = (C/sqrt(S)) r^gamma exp(-r^2 / 2 dr^2), the ring/shell
  packets with the closed-form moments of the analytic module.
* ``sine``: r^gamma replaced by sin(r^2/dr^2), normalized numerically.
* ``displaced``: the reduced wavefunction u(r) = N exp(-(r-rho)^2/dr^2) given
  directly, so the same u is used in every dimension.  Its mirror image
  exp(-(r+rho)^2/dr^2) is subtracted so that u(0) = 0 exactly.

Natural units hbar = M = 1 throughout.
"""

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.special import gammaincc

from .errors import DomainError, GridTooSmall
from .specialfn import gamma_fn, integrate_semi_infinite
from .states import RadialGrid, RadialState

__all__ = [
    "Family",
    "WavePacketSpec",
    "solid_angle",
    "normalization_constant",
    "radial_density",
    "reduced_wavefunction",
    "initial_mean_radius",
    "TRUNCATION_BUDGET",
]

TRUNCATION_BUDGET = 1e-8


class Family(str, Enum):
    POWER = "power"
    SINE = "sine"
    DISPLACED = "displaced"


@dataclass(frozen=True)
class WavePacketSpec:
    family: Family = Family.POWER
    gamma: float = 2.0
    delta_r: float = 1.0
    rho: float = 0.0
    dimension: int = 2

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if not (self.delta_r > 0 and math.isfinite(self.delta_r)):
            raise DomainError("delta_r must be positive and finite")
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise DomainError("dimension must be an integer >= 1")
        object.__setattr__(self, "dimension", int(self.dimension))
        if self.family is Family.POWER and not self.gamma >= 0:
            raise DomainError("gamma must be >= 0 for the power family")
        if self.family is Family.DISPLACED and not self.rho >= 0:
            raise DomainError("rho must be >= 0")

    def with_dimension(self, n) -> "WavePacketSpec":
        return WavePacketSpec(self.family, self.gamma, self.delta_r, self.rho, n)


def solid_angle(n):
    """Total solid angle S = 2 pi^(N/2) / Gamma(N/2) of the unit sphere in R^N."""
    if int(n) != n or n < 1:
        raise DomainError("dimension must be an integer >= 1")
    return 2.0 * math.pi ** (n / 2) / gamma_fn(n / 2)


def normalization_constant(spec: WavePacketSpec):
    """Radial normalization [2 / Gamma(N/2 + gamma)]^(1/2) dr^(-N/2 - gamma).

    Only the power family has this closed form.
    """
    if spec.family is not Family.POWER:
        raise DomainError("normalization_constant is defined for the power family")
    n, g, d = spec.dimension, spec.gamma, spec.delta_r
    return math.sqrt(2.0 / gamma_fn(n / 2 + g)) * d ** (-n / 2 - g)


def _sine_shape(r, spec):
    x = r / spec.delta_r
    return r ** ((spec.dimension - 1) / 2) * np.sin(x * x) * np.exp(-0.5 * x * x)


@lru_cache(maxsize=64)
def _sine_norm2(n, delta_r):
    # integral of r^(N-1) sin^2(r^2/dr^2) e^(-r^2/dr^2); done in units of dr
    def f(x):
        return x ** (n - 1) * np.sin(x * x) ** 2 * np.exp(-x * x)

    res = integrate_semi_infinite(f, 1e-14, phase_rate=lambda x: 2.0 * x + 1.0)
    return res.value * delta_r**n


def _displaced_shape(r, spec):
    # exp(-(r - rho)^2 / dr^2) minus its mirror image, so that u(0) = 0 holds
    # without a jump; the image is below exp(-rho^2 / dr^2) everywhere
    d, rho = spec.delta_r, spec.rho
    return np.exp(-(((r - rho) / d) ** 2)) - np.exp(-(((r + rho) / d) ** 2))


def _displaced_norm2(spec):
    # integral over r >= 0 of the squared shape
    d, rho = spec.delta_r, spec.rho
    return d * math.sqrt(math.pi / 2) * (1.0 - math.exp(-2 * (rho / d) ** 2))


def radial_density(spec: WavePacketSpec, r):
    """Radial probability density W(r), normalized so that its integral over
    r >= 0 is one."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("r must be >= 0")
    n, d = spec.dimension, spec.delta_r
    if spec.family is Family.POWER:
        c2 = normalization_constant(spec) ** 2
        out = c2 * r ** (n + 2 * spec.gamma - 1) * np.exp(-((r / d) ** 2))
    elif spec.family is Family.SINE:
        out = _sine_shape(r, spec) ** 2 / _sine_norm2(n, d)
    else:
        out = _displaced_shape(r, spec) ** 2 / _displaced_norm2(spec)
    return out[()] if out.ndim == 0 else out


def _truncated_probability(spec, r_max):
    n, d = spec.dimension, spec.delta_r
    x2 = (r_max / d) ** 2
    if spec.family is Family.POWER:
        return float(gammaincc(n / 2 + spec.gamma, x2))
    if spec.family is Family.SINE:
        # sin^2 <= 1: bound by the plain Gaussian shell tail
        bound = 0.5 * gamma_fn(n / 2) * gammaincc(n / 2, x2) * d**n
        return float(bound / _sine_norm2(n, d))
    # the image term only lowers the tail
    t = math.sqrt(2) * (r_max - spec.rho) / d
    return d * math.sqrt(math.pi / 8) * math.erfc(t) / _displaced_norm2(spec)


def reduced_wavefunction(spec: WavePacketSpec, grid: RadialGrid) -> RadialState:
    """u(r, 0) = sqrt(S) r^((N-1)/2) Phi(r) sampled on the grid and renormalized
    so that its grid norm (RadialGrid.weights) is 1.

    u is real.  It is non-negative for the power and displaced families; the
    sine family keeps the sign of sin(r^2/dr^2), since |u| would not be the
    same wave packet.  u(0) = 0 holds because the grid starts at r = spacing.
    """
    lost = _truncated_probability(spec, grid.r_max)
    if lost > TRUNCATION_BUDGET:
        raise GridTooSmall(
            f"grid r_max={grid.r_max:g} drops probability {lost:.2e} "
            f"(budget {TRUNCATION_BUDGET:g})"
        )
    r = grid.r
    d = spec.delta_r
    if spec.family is Family.POWER:
        u = r ** ((spec.dimension - 1) / 2 + spec.gamma) * np.exp(-0.5 * (r / d) ** 2)
    elif spec.family is Family.SINE:
        u = _sine_shape(r, spec)
    else:
        # dimension deliberately unused: identical u for every N
        u = _displaced_shape(r, spec)
    u = u / math.sqrt(np.sum(u * u * grid.weights(spec.dimension)))
    return RadialState(grid, u.astype(complex), 0.0, spec.dimension, d)


def initial_mean_radius(spec: WavePacketSpec, tol=1e-13):
    """<r> at t = 0, by quadrature of r W(r)."""
    d = spec.delta_r
    shift = spec.rho if spec.family is Family.DISPLACED else 0.0

    def f(x):
        r = x * d
        return r * radial_density(spec, r) * d

    rate = (lambda x: 2.0 * x + 1.0) if spec.family is Family.SINE else None
    res = integrate_semi_infinite(f, tol, scale=1.0 + shift / d, phase_rate=rate)
    return float(res.value)
