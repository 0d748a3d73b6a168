"""Implosion and explosion of free s-wave packets in N dimensions.

Modules
-------
specialfn  gamma, 1F1, Bessel J0/J1 and semi-infinite quadrature
packets    initial packet families and reduced radial wavefunctions
analytic   closed-form and quadrature moment evolution
evolve     Crank-Nicolson and spectral radial propagation, observables
wigner     Wigner functions and negative phase-space volumes
cli        command line front end (``swave`` / ``python -m swave``)
"""

from .analytic import (
    a_coeff,
    implosion_predicate,
    mean_momentum_gamma2,
    mean_radius_gamma2,
    mean_radius_general_gamma_2d,
    p_infinity,
    r_min_ratio,
    short_time_coefficient,
    tau_min,
)
from .evolve import (
    crank_nicolson_evolve,
    effective_potential,
    find_implosion,
    observables,
    spectral_free_propagate,
)
from .packets import (
    Family,
    WavePacketSpec,
    initial_mean_radius,
    normalization_constant,
    radial_density,
    reduced_wavefunction,
    solid_angle,
)
from .states import MomentRecord, MomentSeries, Provenance, RadialGrid, RadialState, Units
from .wigner import PhasePoint, PhaseSpaceReport, negative_volume, wigner_value

__version__ = "0.1.0"
