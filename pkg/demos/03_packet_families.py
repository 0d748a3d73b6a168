"""
The effect does not depend on the packet shape
==============================================

Other s-wave packets implode in two dimensions too.  Here the power
r^gamma is replaced by sin(r^2/dr^2), and a Gaussian shell displaced to
radius rho is prepared with the same reduced wavefunction u(r) in N = 2 and
N = 3.  Identical u, different dimension: only the sign of the
(N-1)(N-3)/(8 r^2) term differs, and only N = 2 implodes.
"""

from swave.evolve import find_implosion
from swave.packets import Family, WavePacketSpec
from swave.runs import evolve_packet

print("sine packet, spectral propagation to tau = 3")
for n in (2, 3):
    spec = WavePacketSpec(Family.SINE, delta_r=1.0, dimension=n)
    found = find_implosion(evolve_packet(spec, 3.0, 301, "spectral"))
    print(f"  N={n}: minimum {found}")

print()
print("displaced shell (dr = 0.4, rho = 1.5), Crank-Nicolson to tau = 1.6")
for n in (2, 3):
    spec = WavePacketSpec(Family.DISPLACED, delta_r=0.4, rho=1.5, dimension=n)
    found = find_implosion(evolve_packet(spec, 1.6, 201, "cn"))
    print(f"  N={n}: minimum {found}")
