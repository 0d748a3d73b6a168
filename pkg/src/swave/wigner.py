"""Wigner functions of isotropic power packets and their negative volumes.

For psi(x) = C |x|^gamma exp(-|x|^2 / 2), dr = 1, C^2 the squared radial
normalization divided by the solid angle,

    W(x, p) = pi^-N int d^N y psi(x + y) psi(x - y) exp(2i p.y)
            = (C^2 / pi^N) exp(-r^2) int d^N y A(y) exp(-|y|^2) cos(2 p.y),

with A(y) = (|x + y| |x - y|)^gamma and |x +- y|^2 = r^2 +- 2 r y_1 + |y|^2.
Isotropy reduces W to (r, p, cos theta), theta the angle between x and p.
Put x along e_1 and p in the (e_1, e_2) plane.  The Gaussian weight is
integrated by Gauss-Hermite in y_1 (and y_2 for N = 2).  For N = 3 the
transverse plane is done in polar form, which leaves
pi int_0^inf ds exp(-s) A J0(2 p sin(theta) sqrt(s)) for Gauss-Laguerre.

For a packet of width dr, W_dr(r, p) = W_1(r / dr, p dr), and phase-space
volumes do not depend on dr.
"""

from dataclasses import dataclass, field, replace

import numpy as np
from numpy.polynomial.hermite import hermgauss
from numpy.polynomial.laguerre import laggauss
from numpy.polynomial.legendre import leggauss

from .errors import DomainError, ResolutionInsufficient
from .packets import Family, WavePacketSpec, normalization_constant, solid_angle
from .specialfn import bessel_j0

__all__ = [
    "PhasePoint",
    "WignerResolution",
    "PhaseSpaceReport",
    "wigner_value",
    "wigner_grid",
    "negative_volume",
]


@dataclass(frozen=True)
class PhasePoint:
    r: float
    p: float
    cos_theta: float

    def __post_init__(self):
        if not (self.r >= 0 and self.p >= 0):
            raise DomainError("r and p must be >= 0")
        if not -1.0 <= self.cos_theta <= 1.0:
            raise DomainError("cos_theta must lie in [-1, 1]")


@dataclass(frozen=True)
class WignerResolution:
    """Quadrature orders.  n_r, n_p, n_angle are Gauss-Legendre orders on the
    outer phase-space grid; n_inner is the Gauss-Hermite/Laguerre order of
    the y integral, which must resolve cos(2 p y) up to p = p_max (128
    suffices for p_max = 10 in units of 1/dr)."""

    n_r: int = 96
    n_p: int = 96
    n_angle: int = 48
    n_inner: int = 128
    r_max: float = 10.0
    p_max: float = 10.0

    def coarser(self) -> "WignerResolution":
        return replace(self, n_r=self.n_r // 2, n_p=self.n_p // 2,
                       n_angle=max(self.n_angle // 2, 2))

    def finer(self) -> "WignerResolution":
        return replace(self, n_r=2 * self.n_r, n_p=2 * self.n_p,
                       n_angle=2 * self.n_angle)


@dataclass(frozen=True)
class PhaseSpaceReport:
    dimension: int
    v_minus: float
    v_plus: float
    normalization_residual: float
    error_estimate: float
    grid_meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.v_minus < 0 or self.v_plus < 0:
            raise ValueError("volumes must be non-negative")
        if not self.error_estimate >= 0:
            raise ValueError("error_estimate must be non-negative")

    def to_dict(self):
        return {
            "dimension": self.dimension,
            "v_minus": self.v_minus,
            "v_plus": self.v_plus,
            "normalization_residual": self.normalization_residual,
            "error_estimate": self.error_estimate,
            "grid_meta": dict(self.grid_meta),
        }


def _check_spec(spec: WavePacketSpec):
    if spec.family is not Family.POWER:
        raise DomainError("Wigner functions are implemented for the power family only")
    if spec.dimension not in (2, 3):
        raise DomainError("Wigner functions are implemented for N = 2 and N = 3 only")


class _Kernel:
    """Inner quadrature for one spec at unit width."""

    def __init__(self, spec: WavePacketSpec, n_inner):
        n = spec.dimension
        self.n = n
        self.gamma = spec.gamma
        unit = replace(spec, delta_r=1.0)
        self.prefactor = normalization_constant(unit) ** 2 / solid_angle(n) / np.pi**n
        with np.errstate(all="ignore"):
            self.y1, self.w1 = hermgauss(n_inner)
            if n == 2:
                self.t, self.wt = hermgauss(n_inner)
                self.t2 = self.t**2
            else:
                s, ws = laggauss(n_inner)
                self.t, self.wt = np.sqrt(s), np.pi * ws
                self.t2 = s
        # numpy's rules overflow beyond roughly 180 (Laguerre) / 370 (Hermite) nodes
        if not (np.all(np.isfinite(self.w1)) and np.all(np.isfinite(self.wt))):
            raise DomainError(f"n_inner={n_inner} is beyond the usable Gauss rule order")

    def weights_at(self, r):
        """w_i w_j A(y1_i, t_j) for one radius."""
        base = r * r + self.y1[:, None] ** 2 + self.t2[None, :]
        cross = 2.0 * r * self.y1[:, None]
        if self.gamma == 0:
            amp = np.ones_like(base)
        else:
            prod = (base + cross) * (base - cross)
            amp = np.abs(prod) ** (0.5 * self.gamma)
        return self.w1[:, None] * amp * self.wt[None, :]

    def transverse(self, b):
        b = np.asarray(b, dtype=float)
        arg = 2.0 * np.outer(b, self.t)
        if self.n == 2:
            return np.cos(arg)
        return bessel_j0(arg)

    def evaluate(self, r, a, b, trans=None):
        """W at radius r for momentum components a (along x) and b (across)."""
        ca = np.cos(2.0 * np.outer(a, self.y1))
        cb = self.transverse(b) if trans is None else trans
        vals = np.einsum("mi,mi->m", ca @ self.weights_at(r), cb)
        return self.prefactor * np.exp(-r * r) * vals


def wigner_grid(spec: WavePacketSpec, r, p, cos_theta, n_inner=128):
    """Vectorized Wigner function over broadcastable arrays r, p, cos_theta
    (natural units)."""
    _check_spec(spec)
    d = spec.delta_r
    r, p, c = np.broadcast_arrays(
        np.asarray(r, float) / d, np.asarray(p, float) * d, np.asarray(cos_theta, float)
    )
    kern = _Kernel(spec, n_inner)
    a = (p * c).ravel()
    b = (p * np.sqrt(np.clip(1.0 - c * c, 0.0, None))).ravel()
    rf = r.ravel()
    out = np.empty(rf.size)
    for rv in np.unique(rf):
        sel = rf == rv
        out[sel] = kern.evaluate(rv, a[sel], b[sel])
    return out.reshape(r.shape)


def wigner_value(spec: WavePacketSpec, point: PhasePoint, n_inner=128):
    """W(x, p) at a symmetry-reduced phase-space point, natural units."""
    return float(wigner_grid(spec, point.r, point.p, point.cos_theta, n_inner))


def _volumes(spec, res: WignerResolution):
    n = spec.dimension
    kern = _Kernel(spec, res.n_inner)
    xr, wr = leggauss(res.n_r)
    r = 0.5 * res.r_max * (xr + 1.0)
    wr = 0.5 * res.r_max * wr
    xp, wp = leggauss(res.n_p)
    p = 0.5 * res.p_max * (xp + 1.0)
    wp = 0.5 * res.p_max * wp
    xa, wa = leggauss(res.n_angle)
    if n == 2:
        # theta in [0, pi/2]; W depends on cos(theta) only and is even in it
        theta = 0.25 * np.pi * (xa + 1.0)
        cos_t, sin_t = np.cos(theta), np.sin(theta)
        wa = 0.25 * np.pi * wa * 4.0
        meas_r = 2.0 * np.pi * r * wr
        meas_p = p * wp
    else:
        cos_t = 0.5 * (xa + 1.0)
        sin_t = np.sqrt(1.0 - cos_t**2)
        wa = 0.5 * wa * 2.0
        meas_r = 4.0 * np.pi * r**2 * wr
        meas_p = 2.0 * np.pi * p**2 * wp
    a = np.outer(p, cos_t).ravel()
    b = np.outer(p, sin_t).ravel()
    wpa = np.outer(meas_p, wa).ravel()
    trans = kern.transverse(b)
    v_minus = 0.0
    v_plus = 0.0
    # fixed loop order keeps the reduction deterministic
    for ri, mr in zip(r, meas_r):
        f = mr * wpa * kern.evaluate(ri, a, b, trans)
        v_minus -= f[f < 0].sum()
        v_plus += f[f > 0].sum()
    return v_minus, v_plus


def negative_volume(spec: WavePacketSpec, resolution=None, tol=5e-3) -> PhaseSpaceReport:
    """Phase-space volumes V- = int max(-W, 0) and V+ = int max(W, 0).

    The error estimate is the change against a grid with half the outer
    orders; the mass beyond the cutoffs is negligible.  Raises
    ResolutionInsufficient (carrying the report) if it exceeds ``tol``.
    """
    _check_spec(spec)
    res = WignerResolution() if resolution is None else resolution
    vm, vp = _volumes(spec, res)
    cm, cp = _volumes(spec, res.coarser())
    resid = vp - vm - 1.0
    coarse_resid = cp - cm - 1.0
    # beyond r, p = 10 the envelope exp(-r^2 - p^2) leaves < 1e-40 for any
    # moderate gamma, so the cutoff adds nothing measurable to the estimate
    err = max(abs(vm - cm), abs(vp - cp), abs(resid - coarse_resid))
    meta = {
        "n_r": res.n_r, "n_p": res.n_p, "n_angle": res.n_angle,
        "n_inner": res.n_inner, "r_max": res.r_max * spec.delta_r,
        "p_max": res.p_max / spec.delta_r, "gamma": spec.gamma,
        "delta_r": spec.delta_r,
    }
    report = PhaseSpaceReport(spec.dimension, float(vm), float(vp), float(resid),
                              float(err), meta)
    if err > tol:
        raise ResolutionInsufficient(
            f"refinement changed the volumes by {err:.2e} (> {tol:g})", report
        )
    return report
