"""
Negative phase-space volume
===========================

The Wigner function of the gamma = 2 shell is negative on a sizeable
region of phase space, so the packet has no classical phase-space
counterpart.  The negative volume does not depend on dr.  A Gaussian
(gamma = 0) has none.
"""

from swave.packets import Family, WavePacketSpec
from swave.wigner import PhasePoint, negative_volume, wigner_value

for n in (2, 3):
    spec = WavePacketSpec(Family.POWER, gamma=2.0, delta_r=1.0, dimension=n)
    rep = negative_volume(spec)
    print(f"N={n}: V- = {rep.v_minus:.4f}, V+ = {rep.v_plus:.4f}, "
          f"V+ - V- - 1 = {rep.normalization_residual:.1e} (+- {rep.error_estimate:.1e})")

# W is positive at the origin (1/pi^2) but negative at moderate momentum
spec = WavePacketSpec(Family.POWER, 2.0, 1.0, 0.0, 2)
for r, p in ((0.0, 0.0), (0.0, 1.25), (0.5, 1.25)):
    print(f"W(r={r}, p={p}, perpendicular) =",
          wigner_value(spec, PhasePoint(r, p, 0.0)))

gauss = WavePacketSpec(Family.POWER, 0.0, 1.0, 0.0, 2)
print("Gaussian V-:", negative_volume(gauss).v_minus)
