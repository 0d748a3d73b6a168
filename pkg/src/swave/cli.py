"""Command line front end.

    swave moments      analytic gamma = 2 trajectories as CSV
    swave evolve       numerical trajectory of one packet as CSV + JSON summary
    swave wigner       negative phase-space volume as JSON
    swave sweep-gamma  implosion depth for a list of gamma values as CSV
    swave validate     run the acceptance checks

Settings come from command-line flags, then a JSON file given with
``--config``, then built-in defaults.  Exit codes: 0 success, 2 invalid
configuration, 3 numerical failure.
"""

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import analytic
from .errors import DomainError, InsufficientSampling, ResolutionInsufficient, SolverError, SwaveError
from .evolve import DT_FACTOR, asymptotic_momentum, find_implosion
from .packets import Family, WavePacketSpec, reduced_wavefunction
from .runs import (DEFAULT_N_POINTS, default_tau_max, evolve_packet,
                   general_gamma_minimum, packet_grid, spectral_gamma_minimum)
from .wigner import PhasePoint, WignerResolution, negative_volume, wigner_value

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

CONFIG_KEYS = {
    "family", "gamma", "delta_r", "rho", "dim", "tau_max", "samples", "grid",
    "method", "units", "taus", "gammas", "tol", "workers", "resolution",
}
GRID_KEYS = {"r_max", "n", "dt"}
RESOLUTION_KEYS = {"n_r", "n_p", "n_angle", "n_inner"}


class ConfigError(SwaveError):
    pass


def fmt(x):
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return "%.12g" % (x + 0.0)  # folds -0 into 0
    return str(x)


def write_csv(header, rows, path):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    data = buf.getvalue()
    if path is None or path == "-":
        sys.stdout.write(data)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)


def _float_list(text):
    text = text.strip()
    if not text:
        return []
    return [float(v) for v in text.split(",")]


def _int_list(text):
    return [int(v) for v in text.split(",") if v.strip()]


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


def load_config(path):
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(cfg) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key, allowed in (("grid", GRID_KEYS), ("resolution", RESOLUTION_KEYS)):
        sub = cfg.get(key, {})
        if not isinstance(sub, dict) or set(sub) - allowed:
            raise ConfigError(f"'{key}' must be an object with keys {sorted(allowed)}")
    return cfg


def merged(args, cfg, defaults):
    """Flags beat config, config beats defaults."""
    out = dict(defaults)
    flat = dict(cfg)
    for key, sub in (("grid", cfg.get("grid", {})), ("resolution", cfg.get("resolution", {}))):
        flat.pop(key, None)
        flat.update({f"{key}.{k}": v for k, v in sub.items()})
    out.update({k: v for k, v in flat.items() if k in out})
    for key in defaults:
        v = getattr(args, key.replace(".", "_"), None)
        if v is not None:
            out[key] = v
    return out


def _positive(cfg, *keys):
    for k in keys:
        v = cfg.get(k)
        if v is None:
            continue
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not (v > 0 and math.isfinite(v)):
            raise ConfigError(f"{k} must be a positive number, got {v!r}")


def _dims(value):
    dims = value if isinstance(value, list) else [value]
    for d in dims:
        if not isinstance(d, int) or isinstance(d, bool) or not 1 <= d <= 6:
            raise ConfigError(f"dimension must be an integer in [1, 6], got {d!r}")
    return dims


def _tau_max(v):
    if not isinstance(v, (int, float)) or isinstance(v, bool) or not 0 < v <= 100:
        raise ConfigError(f"tau_max must lie in (0, 100], got {v!r}")
    return float(v)


def _samples(v, minimum):
    if not isinstance(v, int) or isinstance(v, bool) or v < minimum:
        raise ConfigError(f"samples must be an integer >= {minimum}, got {v!r}")
    return v


def _spec_from(cfg, dim):
    try:
        family = Family(cfg["family"])
    except ValueError as exc:
        raise ConfigError(f"unknown family {cfg['family']!r}") from exc
    _positive(cfg, "delta_r")
    gamma = cfg["gamma"]
    rho = cfg["rho"]
    if not isinstance(gamma, (int, float)) or gamma < 0:
        raise ConfigError("gamma must be >= 0")
    if not isinstance(rho, (int, float)) or rho < 0:
        raise ConfigError("rho must be >= 0")
    if family is Family.DISPLACED and not rho > 0:
        raise ConfigError("the displaced family needs rho > 0")
    return WavePacketSpec(family, float(gamma), float(cfg["delta_r"]), float(rho), dim)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_moments(args, cfg):
    c = merged(args, cfg, {"dim": [2, 3], "tau_max": 3.0, "samples": 301,
                           "taus": None, "units": "scaled", "delta_r": 1.0})
    dims = _dims(c["dim"])
    _positive(c, "delta_r")
    if c["units"] not in ("scaled", "natural"):
        raise ConfigError("units must be 'scaled' or 'natural'")
    if c["taus"] is not None:
        taus = c["taus"] if isinstance(c["taus"], list) else _float_list(str(c["taus"]))
        if any((not isinstance(t, (int, float))) or t < 0 or t > 100 for t in taus):
            raise ConfigError("taus must lie in [0, 100]")
        if any(b <= a for a, b in zip(taus, taus[1:])):
            raise ConfigError("taus must be strictly increasing")
    else:
        taus = list(np.linspace(0.0, _tau_max(c["tau_max"]), _samples(c["samples"], 0)))
    scaled = c["units"] == "scaled"
    header = ["tau", "mean_r_scaled" if scaled else "mean_r",
              "mean_p_scaled" if scaled else "mean_p", "source", "N"]
    rows = []
    if taus:
        for n in dims:
            series = analytic.analytic_series(n, taus, c["delta_r"], c["units"])
            rows += [(rec.tau, rec.mean_r, rec.mean_p, "analytic", n) for rec in series.records]
    write_csv(header, rows, args.output)
    return EXIT_OK


def _evolve_rows(series, r0, p_inf, scaled, n):
    rows = []
    for rec in series.records:
        r, p = rec.mean_r, rec.mean_p
        if scaled:
            r, p = r / r0, p / p_inf
        rows.append((rec.tau, r, p, rec.norm, series.provenance.value, n))
    return rows


def cmd_evolve(args, cfg):
    c = merged(args, cfg, {"family": "power", "gamma": 2.0, "delta_r": None,
                           "rho": None, "dim": 2, "tau_max": None, "samples": 201,
                           "method": "cn", "units": "scaled", "grid.r_max": None,
                           "grid.n": DEFAULT_N_POINTS, "grid.dt": None})
    fam = c["family"]
    if fam not in {f.value for f in Family}:
        raise ConfigError(f"unknown family {fam!r}")
    if c["delta_r"] is None:
        c["delta_r"] = 0.4 if fam == "displaced" else 1.0
    if c["rho"] is None:
        c["rho"] = 1.5 if fam == "displaced" else 0.0
    if c["tau_max"] is None:
        c["tau_max"] = default_tau_max(fam)
    dims = _dims(c["dim"])
    if len(dims) != 1:
        raise ConfigError("evolve takes a single dimension")
    n = dims[0]
    spec = _spec_from(c, n)
    tau_max = _tau_max(c["tau_max"])
    samples = _samples(c["samples"], 2)
    _positive(c, "grid.r_max", "grid.dt")
    if not isinstance(c["grid.n"], int) or c["grid.n"] < 16:
        raise ConfigError("grid.n must be an integer >= 16")
    if c["method"] not in ("cn", "spectral"):
        raise ConfigError("method must be 'cn' or 'spectral'")
    if c["method"] == "spectral" and n not in (2, 3):
        raise ConfigError("the spectral method supports dim 2 and 3 only")
    if c["units"] not in ("scaled", "natural"):
        raise ConfigError("units must be 'scaled' or 'natural'")
    scaled = c["units"] == "scaled"
    if scaled and n not in (2, 3) and not (spec.family is Family.POWER and spec.gamma == 2):
        raise ConfigError("scaled momenta need dim 2 or 3 or the gamma = 2 packet; "
                          "use --units natural")
    try:
        grid = packet_grid(spec, c["grid.r_max"], c["grid.n"])
        initial = reduced_wavefunction(spec, grid)
    except SwaveError as exc:
        raise ConfigError(str(exc)) from exc
    if c["grid.dt"] is not None and c["grid.dt"] > DT_FACTOR * grid.spacing**2:
        raise ConfigError(f"dt must not exceed {DT_FACTOR:g} * spacing^2 "
                          f"= {DT_FACTOR * grid.spacing**2:.3g} on this grid")
    if spec.family is Family.POWER and spec.gamma == 2:
        p_inf = analytic.p_infinity(n, spec.delta_r)
    elif scaled:
        p_inf = asymptotic_momentum(initial)
    else:
        p_inf = None

    summary = {"family": fam, "dim": n, "method": c["method"], "tau_max": tau_max}
    status = EXIT_OK
    try:
        series = evolve_packet(spec, tau_max, samples, c["method"], grid, c["grid.dt"])
    except SolverError as exc:
        series = exc.series
        summary.update(status="solver_error", error=str(exc))
        status = EXIT_NUMERIC
    r0 = series.records[0].mean_r
    header = ["tau", "mean_r_scaled" if scaled else "mean_r",
              "mean_p_scaled" if scaled else "mean_p", "norm", "source", "N"]
    write_csv(header, _evolve_rows(series, r0, p_inf, scaled, n), args.output)
    summary.update(r0=r0, p_inf=p_inf)
    if status == EXIT_OK:
        try:
            found = find_implosion(series)
        except InsufficientSampling as exc:
            found = None
            summary.update(status="insufficient_sampling", error=str(exc))
            status = EXIT_NUMERIC
        else:
            summary["status"] = "ok"
        summary["implosion"] = found is not None
        summary["tau_min"] = None if found is None else found[0]
        summary["r_min_ratio"] = None if found is None else found[1]
    stream = sys.stdout if args.output not in (None, "-") else sys.stderr
    stream.write(json.dumps(summary, sort_keys=True) + "\n")
    return status


def cmd_wigner(args, cfg):
    c = merged(args, cfg, {"gamma": 2.0, "delta_r": 1.0, "dim": 2, "tol": 5e-3,
                           "resolution.n_r": 96, "resolution.n_p": 96,
                           "resolution.n_angle": 48, "resolution.n_inner": 128})
    dims = _dims(c["dim"])
    if len(dims) != 1 or dims[0] not in (2, 3):
        raise ConfigError("wigner supports dim 2 or 3")
    _positive(c, "delta_r", "tol")
    if not isinstance(c["gamma"], (int, float)) or c["gamma"] < 0:
        raise ConfigError("gamma must be >= 0")
    for k in ("resolution.n_r", "resolution.n_p", "resolution.n_angle", "resolution.n_inner"):
        if not isinstance(c[k], int) or c[k] < 4:
            raise ConfigError(f"{k} must be an integer >= 4")
    spec = WavePacketSpec(Family.POWER, float(c["gamma"]), float(c["delta_r"]), 0.0, dims[0])
    res = WignerResolution(c["resolution.n_r"], c["resolution.n_p"],
                           c["resolution.n_angle"], c["resolution.n_inner"])
    try:
        wigner_value(spec, PhasePoint(0.0, 0.0, 1.0), res.n_inner)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    try:
        report = negative_volume(spec, res, c["tol"])
        status = EXIT_OK
    except ResolutionInsufficient as exc:
        report, status = exc.report, EXIT_NUMERIC
    doc = report.to_dict()
    doc["status"] = "ok" if status == EXIT_OK else "resolution_insufficient"
    text = json.dumps(doc, sort_keys=True) + "\n"
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return status


def _sweep_one(job):
    gamma, method, tol = job
    try:
        if method == "analytic":
            found = general_gamma_minimum(gamma, tol)
        else:
            found = spectral_gamma_minimum(gamma)
    except SwaveError as exc:
        return (gamma, None, None, method, f"error: {type(exc).__name__}")
    if found is None:
        return (gamma, None, None, method, "no_minimum")
    return (gamma, found[0], found[1], method, "ok")


def cmd_sweep_gamma(args, cfg):
    c = merged(args, cfg, {"gammas": [1.5, 2.0, 3.0, 4.0], "method": "analytic",
                           "tol": 1e-10, "workers": 1})
    gammas = c["gammas"] if isinstance(c["gammas"], list) else _float_list(str(c["gammas"]))
    if any(not isinstance(g, (int, float)) or not g > 1 for g in gammas):
        raise ConfigError("every gamma must be > 1")
    methods = {"analytic": ["analytic"], "spectral": ["spectral"],
               "both": ["analytic", "spectral"]}
    if c["method"] not in methods:
        raise ConfigError("method must be 'analytic', 'spectral' or 'both'")
    _positive(c, "tol")
    if not isinstance(c["workers"], int) or c["workers"] < 1:
        raise ConfigError("workers must be a positive integer")
    jobs = [(float(g), m, c["tol"]) for g in gammas for m in methods[c["method"]]]
    if c["workers"] == 1 or len(jobs) <= 1:
        rows = [_sweep_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=c["workers"]) as pool:
            rows = list(pool.map(_sweep_one, jobs))  # map keeps input order
    write_csv(["gamma", "tau_min", "r_min_ratio", "method", "status"], rows, args.output)
    return EXIT_OK


def cmd_validate(args, cfg):
    from .validation import run_all

    only = _int_list(args.only) if args.only else None
    results = run_all(only, stream=sys.stdout)
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERIC


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _dim_arg(text):
    vals = _int_list(text)
    return vals if len(vals) != 1 else vals[0]


def build_parser():
    p = argparse.ArgumentParser(prog="swave", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON configuration file")
        sp.add_argument("--output", "-o", help="output file (default: stdout)")

    sp = sub.add_parser("moments", help="analytic gamma = 2 trajectories")
    common(sp)
    sp.add_argument("--dim", type=_dim_arg, help="dimension or comma list, e.g. 2,3")
    sp.add_argument("--tau-max", dest="tau_max", type=float)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--taus", type=_float_list, help="explicit comma-separated tau grid")
    sp.add_argument("--delta-r", dest="delta_r", type=float)
    sp.add_argument("--units", choices=["scaled", "natural"])
    sp.set_defaults(func=cmd_moments)

    sp = sub.add_parser("evolve", help="numerical trajectory of one packet")
    common(sp)
    sp.add_argument("--family", choices=[f.value for f in Family])
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--delta-r", dest="delta_r", type=float)
    sp.add_argument("--rho", type=float)
    sp.add_argument("--dim", type=_dim_arg)
    sp.add_argument("--tau-max", dest="tau_max", type=float)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--method", choices=["cn", "spectral"])
    sp.add_argument("--units", choices=["scaled", "natural"])
    sp.add_argument("--r-max", dest="grid_r_max", type=float)
    sp.add_argument("--n", dest="grid_n", type=int, help="grid points")
    sp.add_argument("--dt", dest="grid_dt", type=float, help="time step, natural units (default 4 * spacing^2)")
    sp.set_defaults(func=cmd_evolve)

    sp = sub.add_parser("wigner", help="negative phase-space volume")
    common(sp)
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--delta-r", dest="delta_r", type=float)
    sp.add_argument("--dim", type=_dim_arg)
    sp.add_argument("--tol", type=float)
    sp.add_argument("--n-r", dest="resolution_n_r", type=int)
    sp.add_argument("--n-p", dest="resolution_n_p", type=int)
    sp.add_argument("--n-angle", dest="resolution_n_angle", type=int)
    sp.add_argument("--n-inner", dest="resolution_n_inner", type=int)
    sp.set_defaults(func=cmd_wigner)

    sp = sub.add_parser("sweep-gamma", help="implosion depth versus gamma (2D)")
    common(sp)
    sp.add_argument("--gammas", type=_float_list, help="comma-separated gamma values")
    sp.add_argument("--method", choices=["analytic", "spectral", "both"])
    sp.add_argument("--tol", type=float)
    sp.add_argument("--workers", type=int)
    sp.set_defaults(func=cmd_sweep_gamma)

    sp = sub.add_parser("validate", help="run the acceptance checks")
    sp.add_argument("--only", help="comma-separated criterion numbers")
    sp.set_defaults(func=cmd_validate, config=None, output=None)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        return args.func(args, cfg)
    except ConfigError as exc:
        sys.stderr.write(f"swave: configuration error: {exc}\n")
        return EXIT_CONFIG
    except SwaveError as exc:
        sys.stderr.write(f"swave: numerical failure: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
