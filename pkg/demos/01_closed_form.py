"""
Implosion of the gamma = 2 shell from the closed form
=====================================================

A free s-wave packet r^2 exp(-r^2 / 2 dr^2) has a mean radius that first
shrinks and then grows, but only in two dimensions.  The closed form makes
the dichotomy explicit: <r>/r0 = (1 + tau^2/a) / sqrt(1 + tau^2) dips below
one exactly when a > 2.
"""

import numpy as np

from swave import analytic

# a(N) for the first few dimensions; only N = 2 exceeds two
for n in range(1, 7):
    a = analytic.a_coeff(n, exact=True)
    print(f"N={n}: a = {a} ({float(a):.4f}), implodes: {analytic.implosion_predicate(n)}")

# the depth and time of the implosion in two dimensions
print()
print("tau_min(2) =", analytic.tau_min(2), "= 1/sqrt(7)")
print("r_min/r0   =", analytic.r_min_ratio(2), "= sqrt(224/225)")

# the trajectories side by side: N = 2 dips, N = 3 rises from the start
print()
print("  tau    <r>/r0 (N=2)  <r>/r0 (N=3)  <p>/p_inf (N=2)")
for tau in np.linspace(0, 1.5, 11):
    print(f"{tau:5.2f}  {analytic.mean_radius_gamma2(2, tau):12.8f}  "
          f"{analytic.mean_radius_gamma2(3, tau):12.8f}  "
          f"{analytic.mean_momentum_gamma2(2, tau) + 0.0:+12.8f}")

# at early times <r>/r0 = 1 + c tau^2 with c = 1/a - 1/2
print()
print("short-time coefficient N=2:", analytic.short_time_coefficient(2), "(-1/30)")
