"""Value types shared by the packet, analytic and evolution modules."""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np


class Units(str, Enum):
    """Scaled: <r> in units of its initial value r0, <p> in units of p_inf.
    Natural: hbar = M = 1, lengths in whatever unit delta_r is given in."""

    SCALED = "scaled"
    NATURAL = "natural"


class Provenance(str, Enum):
    ANALYTIC = "analytic"
    CRANK_NICOLSON = "cn"
    SPECTRAL = "spectral"


@dataclass(frozen=True)
class RadialGrid:
    """Uniform interior grid on the half line.

    Points are r_j = j * spacing for j = 1..n_points.  The Dirichlet
    ghosts sit at r = 0 and r = r_max = (n_points + 1) * spacing, so the
    grid never touches the origin.
    """

    r_max: float
    n_points: int

    def __post_init__(self):
        if not self.r_max > 0:
            raise ValueError("r_max must be positive")
        if self.n_points < 16:
            raise ValueError("n_points must be at least 16")

    @property
    def spacing(self) -> float:
        return self.r_max / (self.n_points + 1)

    @property
    def r(self) -> np.ndarray:
        return self.spacing * np.arange(1, self.n_points + 1)

    def weights(self, dimension) -> np.ndarray:
        """Quadrature weights for integrals of |u|^2 over the grid.

        Every point carries the spacing, except that outside N = 3 the first
        point stands for the whole cell [0, 3h/2], where |psi|^2 is smooth but
        |u|^2 ~ r^(N-1).  Its weight is that cell's exact volume,
        1.5^N / N * h in units of r_1^(N-1).  These are the weights the
        finite-difference propagator conserves.
        """
        w = np.full(self.n_points, self.spacing)
        if dimension != 3:
            w[0] *= 1.5**dimension / dimension
        return w

    @classmethod
    def for_packet(cls, delta_r, rho=0.0, n_points=4096, r_max=None):
        """Default box: r_max = max(20 delta_r, rho + 12 delta_r)."""
        if r_max is None:
            r_max = max(20.0 * delta_r, rho + 12.0 * delta_r)
        return cls(float(r_max), int(n_points))


@dataclass(frozen=True, eq=False)
class RadialState:
    """Reduced radial wavefunction u(r_j, t) on a RadialGrid.

    ``time`` is in natural units; ``tau`` = time / delta_r**2 is the
    dimensionless clock used for every reported trajectory.
    """

    grid: RadialGrid
    u: np.ndarray
    time: float = 0.0
    dimension: int = 2
    delta_r: float = 1.0

    def __post_init__(self):
        u = np.asarray(self.u, dtype=complex)
        if u.shape != (self.grid.n_points,):
            raise ValueError("u must have one entry per grid point")
        u.setflags(write=False)
        object.__setattr__(self, "u", u)

    @property
    def tau(self) -> float:
        return self.time / self.delta_r**2

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.u) ** 2 * self.grid.weights(self.dimension)))

    def with_u(self, u, time=None) -> "RadialState":
        return replace(self, u=u, time=self.time if time is None else time)


@dataclass(frozen=True)
class MomentRecord:
    tau: float
    mean_r: float
    mean_p: float
    norm: float = 1.0
    units: Units = Units.NATURAL


@dataclass(frozen=True)
class MomentSeries:
    """A trajectory of MomentRecords with strictly increasing tau."""

    records: Tuple[MomentRecord, ...]
    provenance: Provenance
    # scaling constants used by to_scaled(); None when unknown
    r0: Optional[float] = None
    p_inf: Optional[float] = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        recs = tuple(self.records)
        object.__setattr__(self, "records", recs)
        taus = [r.tau for r in recs]
        if any(b <= a for a, b in zip(taus, taus[1:])):
            raise ValueError("records must have strictly increasing tau")

    def __len__(self):
        return len(self.records)

    @property
    def tau(self) -> np.ndarray:
        return np.array([r.tau for r in self.records])

    @property
    def mean_r(self) -> np.ndarray:
        return np.array([r.mean_r for r in self.records])

    @property
    def mean_p(self) -> np.ndarray:
        return np.array([r.mean_p for r in self.records])

    @property
    def norm(self) -> np.ndarray:
        return np.array([r.norm for r in self.records])

    def to_scaled(self, r0=None, p_inf=None) -> "MomentSeries":
        """Divide <r> by r0 and <p> by p_inf (defaults: the stored values,
        falling back to <r> of the first record)."""
        if self.records and self.records[0].units is Units.SCALED:
            return self
        r0 = r0 if r0 is not None else (self.r0 or self.records[0].mean_r)
        p_inf = p_inf if p_inf is not None else self.p_inf
        if p_inf is None:
            raise ValueError("p_inf is needed to scale momenta")
        recs = [
            MomentRecord(r.tau, r.mean_r / r0, r.mean_p / p_inf, r.norm, Units.SCALED)
            for r in self.records
        ]
        return replace(self, records=tuple(recs), r0=r0, p_inf=p_inf)

    @classmethod
    def from_arrays(cls, tau: Sequence[float], mean_r, mean_p, provenance,
                    norm=None, units=Units.NATURAL, **kw) -> "MomentSeries":
        norm = np.ones(len(tau)) if norm is None else norm
        recs = tuple(
            MomentRecord(float(t), float(r), float(p), float(n), units)
            for t, r, p, n in zip(tau, mean_r, mean_p, norm)
        )
        return cls(recs, provenance, **kw)
