"""Command-line front end: synthesis, sweeps, reduction, norms, model I/O.

Configuration can come from flags or from a key=value text file passed via
``--config``; explicit flags win on conflict.  Sweep points are independent
and may be dispatched to a thread pool (``--jobs`` or ``PHHINF_JOBS``); rows
are always assembled in grid order so output is deterministic.
"""

import argparse
import concurrent.futures
import json
import os
import sys

import numpy as np

from .errors import InadmissibleP, IndefiniteV1, PhhinfError
from .kyp import check_lure, extremal_kyp
from .models import DcMotorConfig, MsdConfig, dc_motor, msd_chain
from .reduction import _difference_norm, classical_hinf_bt, error_curve, mhinf_bt
from .synth import (
    classical_hinf,
    classical_weights,
    closed_loop_norm,
    hinf_norm,
    interconnect,
    modified_hinf,
    modified_hinf_with_P,
    modified_weights,
)
from .systems import PHSystem, StateSpace, load_system, ph_to_ss, save_system

EXIT_OK = 0
EXIT_SOLVER = 1
EXIT_CONFIG = 2

_FLOAT_KEYS = {"gamma", "gamma_lo", "gamma_hi", "trunc_tol", "mass", "stiffness", "damping"}
_INT_KEYS = {"n", "jobs", "gamma_points"}


class ConfigError(Exception):
    """Inadmissible configuration; maps to exit code 2."""


# ---------------------------------------------------------------------------
# configuration plumbing
# ---------------------------------------------------------------------------

def _read_config(path):
    """Parse a key=value file; '#' starts a comment, blank lines ignored."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key in _FLOAT_KEYS:
                value = float(value)
            elif key in _INT_KEYS:
                value = int(value)
            out[key] = value
    return out


def _merge(args, defaults):
    """defaults < config file < explicit flags (explicit flags are non-None)."""
    merged = dict(defaults)
    if getattr(args, "config", None):
        cfg = _read_config(args.config)
        unknown = set(cfg) - set(defaults)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        merged.update(cfg)
    for key in defaults:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _jobs(opt):
    if opt.get("jobs") is not None:
        return max(1, int(opt["jobs"]))
    env = os.environ.get("PHHINF_JOBS")
    return max(1, int(env)) if env else 1


def _pool_map(fn, items, jobs):
    """Order-preserving map, threaded when jobs > 1."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _build_model(opt):
    name = opt["model"]
    if name == "dc":
        return dc_motor(DcMotorConfig())
    if name == "msd":
        n = opt.get("n") or 10
        if n % 2:
            raise ConfigError(f"msd state dimension must be even, got {n}")
        return msd_chain(
            MsdConfig(
                n_masses=n // 2,
                mass=opt.get("mass", 4.0),
                stiffness=opt.get("stiffness", 4.0),
                damping=opt.get("damping", 1.0),
            )
        )
    sysm = load_system(name)
    if not isinstance(sysm, PHSystem):
        raise ConfigError(f"{name} does not hold a port-Hamiltonian system")
    return sysm


def _parse_P(value, sysm, gamma=None):
    """Accepted P values: 'none'/'0', '<alpha>Q', '<alpha>Xmax'."""
    if value is None or value.lower() in ("none", "0"):
        return None
    text = value.strip()
    for suffix, base in (("Xmax", None), ("Q", sysm.Q)):
        if text.endswith(suffix):
            head = text[: -len(suffix)].strip() or "1"
            try:
                alpha = float(head)
            except ValueError as exc:
                raise ConfigError(f"bad P value {value!r}") from exc
            if alpha <= 0.0:
                raise ConfigError(f"P scale must be positive in {value!r}")
            if base is None:
                base = extremal_kyp(ph_to_ss(sysm)).Xmax
            return alpha * base
    raise ConfigError(f"bad P value {value!r}")


def _synthesize(sysm, variant, gamma, P_text=None):
    if variant == "classical":
        return classical_hinf(ph_to_ss(sysm), gamma)
    if gamma <= 1.0:
        raise ConfigError(f"modified variants require gamma > 1, got {gamma}")
    if variant == "modified":
        return modified_hinf(sysm, gamma)
    if variant == "modified-with-P":
        P = _parse_P(P_text or "Q", sysm)
        if P is None:
            raise ConfigError("variant modified-with-P needs a nonzero P")
        return modified_hinf_with_P(sysm, gamma, P)
    raise ConfigError(f"unknown variant {variant!r}")


def _gamma_grid(opt):
    if opt.get("gamma_grid"):
        grid = [float(g) for g in str(opt["gamma_grid"]).split(",")]
    else:
        grid = np.linspace(opt["gamma_lo"], opt["gamma_hi"], opt["gamma_points"]).tolist()
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("gamma grid must be strictly increasing")
    return grid


def _orders(opt, n):
    if opt.get("orders"):
        orders = [int(r) for r in str(opt["orders"]).split(",")]
    else:
        orders = list(range(2, n, 2))
    if any(not 1 <= r <= n for r in orders):
        raise ConfigError(f"orders must lie in [1, {n}]")
    return orders


def _write_csv(path, header, rows):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_synthesize(args):
    opt = _merge(
        args,
        {
            "model": "dc",
            "n": None,
            "mass": 4.0,
            "stiffness": 4.0,
            "damping": 1.0,
            "gamma": 2.0,
            "variant": "modified",
            "P": None,
            "output_dir": None,
            "jobs": None,
        },
    )
    sysm = _build_model(opt)
    ctrl = _synthesize(sysm, opt["variant"], opt["gamma"], opt.get("P"))
    cl = interconnect(ph_to_ss(sysm), ctrl.realization, ctrl.weights)
    norm = closed_loop_norm(cl)
    certificate = {
        "model": {
            key: opt[key]
            for key in ("model", "n", "mass", "stiffness", "damping")
            if opt.get(key) is not None
        },
        "P": opt.get("P"),
        "variant": ctrl.variant,
        "gamma": ctrl.gamma,
        "closed_loop_norm": norm,
        "bound_satisfied": bool(norm < ctrl.gamma),
        "bound_verified": bool(ctrl.bound_verified),
        "strong_lure": bool(ctrl.strong_lure),
        "filter_residual": ctrl.filter_residual,
        "control_residual": ctrl.control_residual,
        "ph_form": ctrl.ph_form is not None,
    }
    if opt["output_dir"]:
        save_system(opt["output_dir"], ctrl.realization, extra={"certificate": certificate})
        if ctrl.ph_form is not None:
            save_system(
                os.path.join(opt["output_dir"], "ph"),
                ctrl.ph_form,
                extra={"certificate": certificate},
            )
    print(json.dumps(certificate, indent=2, sort_keys=True))
    return EXIT_OK


def _sweep_point(sysm, plant_ss, variant, gamma, P_text):
    try:
        ctrl = _synthesize(sysm, variant, gamma, P_text)
        norm = closed_loop_norm(interconnect(plant_ss, ctrl.realization, ctrl.weights))
        return f"{norm:.15e}", "true" if norm < gamma else "false", ""
    except (PhhinfError, ConfigError) as exc:
        return "nan", "false", type(exc).__name__


def cmd_sweep(args):
    opt = _merge(
        args,
        {
            "model": "dc",
            "n": None,
            "mass": 4.0,
            "stiffness": 4.0,
            "damping": 1.0,
            "gamma_grid": None,
            "gamma_lo": 1.05,
            "gamma_hi": 3.95,
            "gamma_points": 30,
            "variants": "classical,modified,modified-with-P",
            "P": "Q",
            "output_dir": ".",
            "jobs": None,
        },
    )
    sysm = _build_model(opt)
    plant_ss = ph_to_ss(sysm)
    grid = _gamma_grid(opt)
    variants = [v.strip() for v in opt["variants"].split(",") if v.strip()]
    known = {"classical", "modified", "modified-with-P"}
    if not variants or set(variants) - known:
        raise ConfigError(f"variants must be a subset of {sorted(known)}")
    points = [(g, v) for g in grid for v in variants]

    def run(point):
        g, v = point
        return _sweep_point(sysm, plant_ss, v, g, opt["P"])

    results = _pool_map(run, points, _jobs(opt))
    rows = [
        (f"{g:.15e}", v, norm, ok, reason)
        for (g, v), (norm, ok, reason) in zip(points, results)
    ]
    os.makedirs(opt["output_dir"], exist_ok=True)
    out = os.path.join(opt["output_dir"], "sweep.csv")
    _write_csv(out, "gamma,variant,closed_loop_norm,bound_satisfied,reason", rows)
    print(out)
    return EXIT_OK


def cmd_reduce(args):
    opt = _merge(
        args,
        {
            "model": "msd",
            "n": None,
            "mass": 4.0,
            "stiffness": 4.0,
            "damping": 1.0,
            "gamma": 2.0,
            "P": None,
            "representations": "canonical,xmin,xmax",
            "orders": None,
            "output_dir": ".",
            "jobs": None,
        },
    )
    sysm = _build_model(opt)
    plant_ss = ph_to_ss(sysm)
    gamma = opt["gamma"]
    P = _parse_P(opt.get("P"), sysm)
    orders = _orders(opt, sysm.n)
    reps = [r.strip() for r in opt["representations"].split(",") if r.strip()]
    os.makedirs(opt["output_dir"], exist_ok=True)
    report = {"model": opt["model"], "n": sysm.n, "gamma": gamma, "curves": {}}

    def rows_of(curve):
        return [(str(r), f"{err:.15e}") for r, err in curve]

    for rep in reps:
        try:
            curve = error_curve(sysm, gamma, orders, representation=rep, P=P)
        except PhhinfError as exc:
            report["curves"][rep] = {"error": type(exc).__name__, "detail": str(exc)}
            continue
        path = os.path.join(opt["output_dir"], f"{rep}.csv")
        _write_csv(path, "r,error", rows_of(curve))
        report["curves"][rep] = {"file": os.path.basename(path), "orders": [r for r, _ in curve]}

    def classical_point(r):
        try:
            red = classical_hinf_bt(plant_ss, gamma, r)
            return (r, _difference_norm(plant_ss.A, plant_ss.B, plant_ss.C, red.A, red.B, red.C))
        except PhhinfError:
            return None

    classical = [pt for pt in _pool_map(classical_point, orders, _jobs(opt)) if pt]
    path = os.path.join(opt["output_dir"], "classical.csv")
    _write_csv(path, "r,error", rows_of(classical))
    report["curves"]["classical"] = {
        "file": os.path.basename(path),
        "orders": [r for r, _ in classical],
    }
    report_path = os.path.join(opt["output_dir"], "report.json")
    with open(report_path, "w", encoding="ascii", newline="\n") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(report_path)
    return EXIT_OK


def cmd_norm(args):
    opt = _merge(
        args,
        {
            "model": "dc",
            "n": None,
            "mass": 4.0,
            "stiffness": 4.0,
            "damping": 1.0,
        },
    )
    name = opt["model"]
    if name not in ("dc", "msd") and os.path.isdir(name):
        sysm = load_system(name)
        ss = ph_to_ss(sysm) if isinstance(sysm, PHSystem) else sysm
    else:
        ss = ph_to_ss(_build_model(opt))
    print(f"{hinf_norm(ss):.15e}")
    return EXIT_OK


def cmd_model_export(args):
    opt = _merge(
        args,
        {
            "model": "dc",
            "n": None,
            "mass": 4.0,
            "stiffness": 4.0,
            "damping": 1.0,
            "output_dir": None,
        },
    )
    if not opt["output_dir"]:
        raise ConfigError("model export needs --output-dir")
    sysm = _build_model(opt)
    save_system(opt["output_dir"], sysm, extra={"model": opt["model"]})
    print(opt["output_dir"])
    return EXIT_OK


def cmd_verify(args):
    path = args.path
    loaded = load_system(path)
    report = {"path": path, "kind": "ph" if isinstance(loaded, PHSystem) else "ss"}
    if isinstance(loaded, PHSystem):
        check_lure(ph_to_ss(loaded), loaded.Q, tol=1e-6)
        report["lure"] = "pass"
    with open(os.path.join(path, "manifest.json"), encoding="ascii") as fh:
        manifest = json.load(fh)
    cert = manifest.get("certificate")
    if cert and "model" in cert:
        # rebuild the plant and the interconnection, then recompute the
        # closed-loop norm the certificate claims
        plant = _build_model({**cert["model"]})
        plant_ss = ph_to_ss(plant)
        realization = loaded if isinstance(loaded, StateSpace) else ph_to_ss(loaded)
        if cert["variant"] == "classical":
            weights = classical_weights(plant_ss)
        else:
            P = _parse_P(cert.get("P") or ("Q" if cert["variant"] == "modified-with-P" else "0"), plant)
            weights = modified_weights(plant, cert["gamma"], P)
        norm = closed_loop_norm(interconnect(plant_ss, realization, weights))
        report["closed_loop_norm"] = norm
        if abs(norm - cert["closed_loop_norm"]) > 1e-6 * max(1.0, cert["closed_loop_norm"]):
            print(json.dumps(report, indent=2, sort_keys=True))
            print("certificate mismatch: stored norm disagrees with recomputation", file=sys.stderr)
            return EXIT_SOLVER
        report["certificate"] = "pass"
    else:
        report["hinf_norm"] = hinf_norm(loaded if isinstance(loaded, StateSpace) else ph_to_ss(loaded))
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_model_flags(p):
    p.add_argument("--model", help="dc | msd | path to a saved system")
    p.add_argument("--n", type=int, help="state dimension for msd (even)")
    p.add_argument("--mass", type=float)
    p.add_argument("--stiffness", type=float)
    p.add_argument("--damping", type=float)
    p.add_argument("--config", help="key=value file; flags win on conflict")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="phhinf",
        description="Structure-preserving H-infinity synthesis and model reduction "
        "for port-Hamiltonian systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synthesize", help="synthesize one controller")
    _add_model_flags(p)
    p.add_argument("--gamma", type=float)
    p.add_argument("--variant", choices=["classical", "modified", "modified-with-P"])
    p.add_argument("--P", help="none | <alpha>Q | <alpha>Xmax")
    p.add_argument("--output-dir", dest="output_dir")
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("sweep", help="closed-loop norms over a gamma grid")
    _add_model_flags(p)
    p.add_argument("--gamma-grid", dest="gamma_grid", help="comma-separated gammas")
    p.add_argument("--gamma-lo", dest="gamma_lo", type=float)
    p.add_argument("--gamma-hi", dest="gamma_hi", type=float)
    p.add_argument("--gamma-points", dest="gamma_points", type=int)
    p.add_argument("--variants", help="comma-separated subset of the three variants")
    p.add_argument("--P", help="P for the modified-with-P variant")
    p.add_argument("--output-dir", dest="output_dir")
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("reduce", help="reduction error curves per representation")
    _add_model_flags(p)
    p.add_argument("--gamma", type=float)
    p.add_argument("--P", help="none | <alpha>Q | <alpha>Xmax")
    p.add_argument("--representations", help="subset of canonical,xmin,xmax")
    p.add_argument("--orders", help="comma-separated target orders")
    p.add_argument("--output-dir", dest="output_dir")
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("norm", help="H-infinity norm of a model")
    _add_model_flags(p)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("model", help="model utilities")
    msub = p.add_subparsers(dest="model_command", required=True)
    pe = msub.add_parser("export", help="write a benchmark to disk")
    _add_model_flags(pe)
    pe.add_argument("--output-dir", dest="output_dir")
    pe.set_defaults(func=cmd_model_export)

    p = sub.add_parser("verify", help="re-validate a saved system or controller")
    p.add_argument("path")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, IndefiniteV1, InadmissibleP, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PhhinfError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
