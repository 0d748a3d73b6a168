"""
Solving the radial Schroedinger equation
========================================

The closed form can be checked by propagating the reduced wavefunction
u = sqrt(S) r^((N-1)/2) psi.  In two dimensions u feels the attractive
-1/(8 r^2) potential, which is what pulls the shell inwards.  Two
propagators are compared: Crank-Nicolson on a uniform grid and exact
free propagation in the box eigenmodes.
"""

import time

import numpy as np

from swave import analytic
from swave.evolve import find_implosion
from swave.packets import Family, WavePacketSpec
from swave.runs import evolve_packet

for n in (2, 3):
    spec = WavePacketSpec(Family.POWER, gamma=2.0, delta_r=1.0, dimension=n)
    r0 = analytic.initial_radius_gamma2(n)
    exact = None
    print(f"--- N = {n} ---")
    for method in ("cn", "spectral"):
        t0 = time.perf_counter()
        series = evolve_packet(spec, tau_max=2.0, samples=201, method=method)
        elapsed = time.perf_counter() - t0
        exact = analytic.mean_radius_gamma2(n, series.tau)
        err = np.max(np.abs(series.mean_r / r0 / exact - 1))
        print(f"{method:8s}  max relative error {err:.1e}  ({elapsed:.1f} s)"
              f"  norm drift {np.ptp(series.norm):.1e}")
        print(f"          minimum: {find_implosion(series)}")
