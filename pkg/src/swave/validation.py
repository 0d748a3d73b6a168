"""Acceptance checks, shared by ``swave validate`` and the test suite.

Each check returns a CheckResult; run_all prints one PASS/FAIL line per
criterion.  Tolerances are fixed here and never loosened to make a check
pass.
"""

import contextlib
import io
import math
import os
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import analytic
from .evolve import crank_nicolson_evolve, find_implosion, spectral_series
from .packets import Family, WavePacketSpec, reduced_wavefunction
from .runs import evolve_packet, general_gamma_minimum, packet_grid, spectral_gamma_minimum
from .specialfn import hyp1f1
from .states import RadialGrid
from .wigner import negative_volume

__all__ = ["CheckResult", "CHECKS", "run_check", "run_all"]


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    details: list = field(default_factory=list)

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} criterion {self.number}: {self.title} | " + "; ".join(self.details)


class _Collector:
    def __init__(self):
        self.ok = True
        self.details = []

    def check(self, cond, text):
        cond = bool(cond)
        self.ok &= cond
        self.details.append(("" if cond else "FAILED ") + text)
        return cond


# ---------------------------------------------------------------------------


def check_golden_constants():
    c = _Collector()
    c.check(analytic.a_coeff(2, exact=True) == Fraction(15, 7), "a(2) = 15/7 exactly")
    c.check(analytic.a_coeff(3, exact=True) == 2, "a(3) = 2 exactly")
    t = analytic.tau_min(2)
    c.check(abs(t - 1 / math.sqrt(7)) <= 1e-12, f"tau_min(2) = {t:.15f}")
    r = analytic.r_min_ratio(2)
    c.check(abs(r - math.sqrt(224 / 225)) <= 1e-12, f"r_min_ratio(2) = {r:.15f}")
    c.check(f"{r:.4f}" == "0.9978", f"prints as {r:.4f}")
    return c


def check_dichotomy():
    c = _Collector()
    taus = np.linspace(0.0, 5.0, 1000)
    for n in range(1, 7):
        pred = analytic.implosion_predicate(n)
        neg = bool(np.any(analytic.mean_momentum_gamma2(n, taus) < 0))
        c.check(pred == (n == 2) and neg == (n == 2),
                f"N={n}: predicate={pred}, negative momentum={neg}")
    return c


def check_solver_agreement():
    c = _Collector()
    taus = np.linspace(0.0, 2.0, 201)
    for n in (2, 3):
        spec = WavePacketSpec(Family.POWER, 2.0, 1.0, 0.0, n)
        t0 = time.perf_counter()
        cn = evolve_packet(spec, 2.0, 201, "cn")
        t_cn = time.perf_counter() - t0
        t0 = time.perf_counter()
        sp = evolve_packet(spec, 2.0, 201, "spectral")
        t_sp = time.perf_counter() - t0
        ref = analytic.mean_radius_gamma2(n, taus)
        r0 = analytic.initial_radius_gamma2(n)
        e_cn = np.max(np.abs(cn.mean_r / r0 / ref - 1))
        e_sp = np.max(np.abs(sp.mean_r / r0 / ref - 1))
        e_x = np.max(np.abs(cn.mean_r / sp.mean_r - 1))
        c.check(e_cn <= 1e-3, f"N={n} CN vs formula {e_cn:.1e}")
        c.check(e_sp <= 1e-3, f"N={n} spectral vs formula {e_sp:.1e}")
        c.check(e_x <= 1e-3, f"N={n} CN vs spectral {e_x:.1e}")
        c.check(t_cn <= 120 and t_sp <= 120, f"N={n} runtimes {t_cn:.0f}s/{t_sp:.0f}s")
    return c


def check_displaced():
    c = _Collector()
    found = {}
    u = {}
    for n in (2, 3):
        spec = WavePacketSpec(Family.DISPLACED, 0.0, 0.4, 1.5, n)
        u[n] = reduced_wavefunction(spec, packet_grid(spec)).u
        found[n] = find_implosion(evolve_packet(spec, 1.6, 201, "cn"))
    c.check(np.array_equal(u[2], u[3]), "identical initial u for N=2 and N=3")
    c.check(found[2] is not None, f"N=2 minimum {found[2]}")
    c.check(found[3] is None, f"N=3 minimum {found[3]}")
    return c


def check_sine():
    c = _Collector()
    spec = WavePacketSpec(Family.SINE, 0.0, 1.0, 0.0, 2)
    found = find_implosion(evolve_packet(spec, 3.0, 301, "spectral"))
    if not c.check(found is not None, "N=2 sine packet has a minimum"):
        return c
    t, r = found
    c.check(abs(t - 1.11) <= 0.05, f"tau_min = {t:.4f} (target 1.11 +- 0.05)")
    c.check(abs(r - 0.9964) <= 5e-4, f"r_min_ratio = {r:.5f} (target 0.9964 +- 5e-4)")
    return c


def check_general_gamma():
    c = _Collector()
    for t in (0.2, 0.5, 1.0):
        v = analytic.mean_radius_general_gamma_2d(2.0, t, 1e-10)
        ref = analytic.mean_radius_gamma2(2, t)
        c.check(abs(v - ref) <= 1e-4, f"gamma=2 tau={t}: diff {abs(v - ref):.1e}")
    for g in (1.5, 3.0, 4.0):
        a = general_gamma_minimum(g)
        s = spectral_gamma_minimum(g)
        if not c.check(a is not None and a[1] < 1, f"gamma={g}: minimum {a}"):
            continue
        c.check(s is not None and abs(s[0] - a[0]) <= 1e-3 and abs(s[1] - a[1]) <= 1e-3,
                f"gamma={g}: spectral minimum {None if s is None else tuple(round(x, 7) for x in s)}")
    return c


def check_wigner():
    c = _Collector()
    t0 = time.perf_counter()
    for n, target in ((2, 0.27), (3, 0.23)):
        rep = negative_volume(WavePacketSpec(Family.POWER, 2.0, 1.0, 0.0, n))
        c.check(abs(rep.v_minus - target) <= 0.02, f"N={n} V- = {rep.v_minus:.4f}")
        c.check(abs(rep.normalization_residual) <= rep.error_estimate,
                f"N={n} V+ - V- - 1 = {rep.normalization_residual:.1e} "
                f"(error estimate {rep.error_estimate:.1e})")
    rep = negative_volume(WavePacketSpec(Family.POWER, 0.0, 1.0, 0.0, 2))
    c.check(rep.v_minus <= 1e-4, f"gamma=0 V- = {rep.v_minus:.1e}")
    elapsed = time.perf_counter() - t0
    c.check(elapsed <= 600, f"runtime {elapsed:.0f}s")
    return c


def check_properties():
    c = _Collector()
    # unitarity over 1e5 steps, box large enough that nothing reaches the edge
    spec = WavePacketSpec(Family.POWER, 2.0, 1.0, 0.0, 2)
    state = reduced_wavefunction(spec, RadialGrid(20.0, 4096))
    series = crank_nicolson_evolve(state, 2e-5, 100_000, 1000)
    drift = np.max(np.abs(series.norm - series.norm[0]))
    c.check(drift <= 1e-7, f"norm drift over 1e5 steps {drift:.1e}")
    # Ehrenfest
    ehr = 0.0
    for n in (2, 3):
        s = evolve_packet(WavePacketSpec(Family.POWER, 2.0, 1.0, 0.0, n), 2.0, 201, "cn")
        t, r, p = s.tau, s.mean_r, s.mean_p
        ehr = max(ehr, np.max(np.abs((r[2:] - r[:-2]) / (t[2:] - t[:-2]) - p[1:-1])))
    c.check(ehr <= 2e-4, f"Ehrenfest d<r>/dt - <p> {ehr:.1e}")
    # second-order convergence against the spectral oracle
    for n in (2, 3):
        spec = WavePacketSpec(Family.POWER, 2.0, 1.0, 0.0, n)
        errs = []
        # nested grids: spacing 20/2048 and 20/4096, dt below 4 * spacing^2
        for m, dt in ((2047, 1.25e-4), (4095, 6.25e-5)):
            grid = RadialGrid(20.0, m)
            init = reduced_wavefunction(spec, grid)
            cn = crank_nicolson_evolve(init, dt, int(round(1.0 / dt)), int(round(1.0 / dt)))
            ref = spectral_series(init, [0.0, 1.0])
            errs.append(abs(cn.mean_r[-1] / ref.mean_r[-1] - 1))
        c.check(errs[0] / errs[1] >= 3.5,
                f"N={n} convergence factor {errs[0] / errs[1]:.2f}")
    # Kummer transformation in the required range
    worst = 0.0
    for gamma in np.linspace(1.05, 6.0, 12):
        a = -(gamma - 1) / 2
        for mod in np.linspace(0.5, 200.0, 25):
            for phi in (np.pi / 2, -np.pi / 2, np.pi / 2 - 0.1, -np.pi / 2 + 0.1):
                z = mod * np.exp(1j * phi)
                direct = hyp1f1(a, 1.0, z, kummer=False)
                flipped = hyp1f1(a, 1.0, z, kummer=True)
                worst = max(worst, abs(direct - flipped) / abs(direct))
    c.check(worst <= 1e-8, f"Kummer self-consistency {worst:.1e}")
    # short-time coefficient by finite differences
    h = 1e-3
    for n in (2, 3):
        f = analytic.mean_radius_gamma2
        fd = (f(n, h) - 2 * f(n, 0.0) + f(n, -h)) / h**2
        want = 2 * analytic.short_time_coefficient(n)
        c.check(abs(fd - want) <= 1e-6, f"N={n} d2<r>/dtau2(0) = {fd:.8f} vs {want:.8f}")
    return c


def _run_cli(argv):
    from .cli import main

    with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(io.StringIO()):
        code = main(argv)
    return code


def check_determinism():
    c = _Collector()
    with tempfile.TemporaryDirectory() as tmp:
        for name, argv in (
            ("moments", ["moments", "--dim", "2,3", "--tau-max", "3", "--samples", "301"]),
            ("sweep-gamma", ["sweep-gamma", "--gammas", "1.5,2,3,4"]),
        ):
            blobs = []
            for k in range(2):
                path = os.path.join(tmp, f"{name}{k}.csv")
                code = _run_cli(argv + ["--output", path])
                with open(path, "rb") as fh:
                    blobs.append(fh.read())
                c.check(code == 0, f"{name} run {k} exit {code}")
            c.check(blobs[0] == blobs[1], f"{name} byte-identical ({len(blobs[0])} bytes)")
    return c


CHECKS = {
    1: ("golden constants", check_golden_constants),
    2: ("implosion dichotomy", check_dichotomy),
    3: ("solver-formula agreement", check_solver_agreement),
    4: ("displaced packet inserts", check_displaced),
    5: ("sine packet", check_sine),
    6: ("general gamma", check_general_gamma),
    7: ("Wigner volumes", check_wigner),
    8: ("property suites", check_properties),
    9: ("CLI determinism", check_determinism),
}


def run_check(number) -> CheckResult:
    title, fn = CHECKS[number]
    try:
        col = fn()
        return CheckResult(number, title, col.ok, col.details)
    except Exception as exc:  # a crash is a failure, reported like one
        return CheckResult(number, title, False, [f"raised {type(exc).__name__}: {exc}"])


def run_all(only=None, stream=None):
    results = []
    for number in sorted(CHECKS if only is None else only):
        res = run_check(number)
        results.append(res)
        if stream is not None:
            stream.write(res.line() + "\n")
            stream.flush()
    return results
