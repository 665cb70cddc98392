"""Command-line front end: ``dragfall simulate|spectrum|thermo|sweep|verify``.

Parameter precedence is flag > ``--config`` file > built-in default.  The
config file is flat ``key = value`` text; keys are option names with dashes
or underscores (``t-end`` and ``t_end`` both work), ``#`` starts a comment.

Exit codes: 0 success, 1 computation or validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import dynamics, quantum, statmech, verify
from .dynamics import DomainError, Formulation, IntegrationError, MediumParams, PhaseState
from .svg import level_diagram, line_plot
from .tables import Table

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# (name, type, default, help) per subcommand; defaults are natural units.
_ENSEMBLE = [
    ("n1", int, 1, "number of small particles"),
    ("n2", int, 1, "number of big particles"),
    ("m1", float, 0.1, "small-particle mass"),
    ("m2", float, 1.0, "big-particle mass"),
    ("alpha", float, 0.01, "quadratic drag coefficient"),
    ("g", float, 1.0, "gravitational acceleration"),
    ("L", float, 1.0, "transverse side of the container"),
    ("height", float, 1.0, "vertical extent of the container"),
    ("k-b", float, 1.0, "Boltzmann constant"),
    ("h-planck", float, 1.0, "Planck constant in the phase-space measure"),
]

OPTIONS = {
    "simulate": [
        ("m", float, 1.0, "mass"),
        ("g", float, 1.0, "gravitational acceleration"),
        ("alpha", float, 0.0, "quadratic drag coefficient"),
        ("x0", float, 10.0, "initial position"),
        ("v0", float, 0.0, "initial velocity"),
        ("t-end", float, 2.0, "final time"),
        ("tol", float, 1e-10, "integrator tolerance"),
        ("samples", int, 201, "number of equally spaced output times"),
        ("drift-threshold", float, 1e-8, "largest acceptable relative drift of K1 and K2"),
        ("diagnostics", str, "both", "constants to monitor: log, exp or both"),
    ],
    "spectrum": [
        ("hbar", float, 1.0, "reduced Planck constant"),
        ("m", float, 1.0, "mass"),
        ("g", float, 1.0, "gravitational acceleration"),
        ("alpha", float, 0.01, "quadratic drag coefficient"),
        ("n-max", int, 10, "highest level (at most 100)"),
        ("oracle", int, 1, "1 to add quadrature deviation columns, 0 to skip"),
    ],
    "thermo": _ENSEMBLE + [
        ("beta", float, 1.0, "inverse temperature"),
    ],
    "sweep": _ENSEMBLE + [
        ("beta-min", float, 0.1, "smallest beta"),
        ("beta-max", float, 1e4, "largest beta"),
        ("points-per-decade", int, 12, "grid density (log-spaced)"),
    ],
    "verify": [],
}


class UsageError(Exception):
    pass


def _dest(name):
    return name.replace("-", "_")


def _read_config(path) -> dict:
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        k, v = (s.strip() for s in line.split("=", 1))
        out[_dest(k)] = v
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out-dir", default=argparse.SUPPRESS, help="output directory (default .)")
    common.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS,
                        help="table format (default csv)")
    common.add_argument("--config", default=argparse.SUPPRESS, help="flat key=value parameter file")

    p = argparse.ArgumentParser(prog="dragfall", parents=[common],
                                description="Quadratic-drag fall: dynamics, bouncer spectra, thermodynamics.")
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "simulate": "integrate one trajectory and report conservation of K1, K2",
        "spectrum": "bouncer levels with both first-order shifts",
        "thermo": "ln Z, U and C_V of both formulations at one beta",
        "sweep": "C_V of both formulations over a beta grid, with crossover",
        "verify": "run every oracle check and write a JSON report",
    }
    for cmd, opts in OPTIONS.items():
        sp = sub.add_parser(cmd, parents=[common], help=helps[cmd])
        for name, typ, default, hlp in opts:
            sp.add_argument(f"--{name}", type=typ, default=None, help=f"{hlp} (default {default})")
        if cmd in ("spectrum", "sweep", "simulate"):
            sp.add_argument("--svg", action="store_true", help="also write an SVG plot")
        if cmd == "verify":
            sp.add_argument("--check", action="append", default=None, metavar="NAME",
                            help="run the named check (repeatable; combines with --criterion)")
            sp.add_argument("--criterion", action="append", type=int, default=None,
                            help="run every check of this acceptance criterion (repeatable)")
            sp.add_argument("--list", action="store_true", help="list check names and exit")
    return p


def resolve(args) -> dict:
    """Merge flags, config file and defaults into one dict of parameters."""
    cfg = _read_config(args.config) if getattr(args, "config", None) else {}
    known = {_dest(n) for n, *_ in OPTIONS[args.command]} | {"out_dir", "format"}
    extra = set(cfg) - known - {"config"}
    if extra:
        raise UsageError(f"unknown config key(s) for {args.command}: {', '.join(sorted(extra))}")
    out = {}
    for name, typ, default, _ in OPTIONS[args.command]:
        d = _dest(name)
        flag = getattr(args, d, None)
        if flag is not None:
            out[d] = flag
        elif d in cfg:
            try:
                out[d] = typ(cfg[d])
            except ValueError as exc:
                raise UsageError(f"config value for {name}: {exc}") from exc
        else:
            out[d] = default
    out["out_dir"] = Path(getattr(args, "out_dir", None) or cfg.get("out_dir", "."))
    fmt = getattr(args, "format", None) or cfg.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {fmt!r}")
    out["format"] = fmt
    return out


def _write_svg(out_dir: Path, name: str, text: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{name}.svg"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def _ensemble(cfg, beta) -> statmech.EnsembleParams:
    return statmech.EnsembleParams(
        n1=cfg["n1"], n2=cfg["n2"], m1=cfg["m1"], m2=cfg["m2"], alpha=cfg["alpha"], g=cfg["g"],
        L=cfg["L"], height=cfg["height"], beta=beta, k_b=cfg["k_b"], h_planck=cfg["h_planck"])


# ------------------------------------------------------------ commands

def cmd_simulate(cfg, svg=False) -> int:
    diag = cfg["diagnostics"]
    if diag not in ("log", "exp", "both"):
        raise UsageError("--diagnostics must be log, exp or both")
    if cfg["samples"] < 2:
        raise UsageError("--samples must be at least 2")
    params = MediumParams(cfg["m"], cfg["g"], cfg["alpha"])
    initial = PhaseState(cfg["x0"], cfg["v0"])
    want_log = diag in ("log", "both")
    if want_log and params.alpha > 0 and abs(initial.v) >= params.terminal_speed * (1 - dynamics.DOMAIN_MARGIN):
        raise DomainError(f"|v0| = {abs(initial.v):.6g} is not below the terminal speed "
                          f"{params.terminal_speed:.6g}; the LOG constant K1 is undefined there "
                          "(use --diagnostics exp)")
    t_eval = np.linspace(0.0, cfg["t_end"], cfg["samples"])
    tr = dynamics.integrate(params, initial, cfg["t_end"], cfg["tol"], t_eval=t_eval)
    if want_log and not tr.k1_valid:
        raise DomainError("the trajectory reached terminal speed; K1 is undefined")
    keep = np.isin(tr.t, t_eval)
    k1 = tr.k1[keep] if tr.k1 is not None else np.full(keep.sum(), np.nan)
    table = Table("simulate", ["t", "x", "v", "K1", "K2"])
    for row in zip(tr.t[keep], tr.x[keep], tr.v[keep], k1, tr.k2[keep]):
        table.add(*(float(c) for c in row))
    drifts = {}
    if want_log:
        drifts["k1_drift"] = tr.k1_drift
    if diag in ("exp", "both"):
        drifts["k2_drift"] = tr.k2_drift
    ok = all(d <= cfg["drift_threshold"] for d in drifts.values())
    table.meta = {"params": {"m": params.m, "g": params.g, "alpha": params.alpha,
                             "x0": initial.x, "v0": initial.v, "t_end": cfg["t_end"]},
                  **drifts, "drift_threshold": cfg["drift_threshold"], "passed": ok}
    path = table.write(cfg["out_dir"], cfg["format"])
    if svg:
        _write_svg(cfg["out_dir"], "simulate", line_plot(
            [("x(t)", table.column("t"), table.column("x"))],
            title="trajectory", xlabel="t", ylabel="x"))
    print(json.dumps({"output": str(path), **drifts, "drift_threshold": cfg["drift_threshold"],
                      "passed": ok}))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_spectrum(cfg, svg=False) -> int:
    if not 1 <= cfg["n_max"] <= 100:
        raise UsageError("--n-max must lie in 1..100")
    basis = quantum.BouncerBasis(cfg["hbar"], MediumParams(cfg["m"], cfg["g"], cfg["alpha"]), cfg["n_max"])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        lines = quantum.spectrum(basis, cfg["n_max"])
    cols = ["n", "z_n", "E0", "dE_log", "dE_exp", "E_total_log", "E_total_exp", "splitting",
            "dE_exp_published"]
    oracle = bool(cfg["oracle"])
    if oracle:
        cols += ["oracle_dev_log", "oracle_dev_exp"]
    table = Table("spectrum", cols)
    worst = 0.0
    for ln in lines:
        row = [ln.n, ln.z_n, ln.E0, ln.dE_log, ln.dE_exp, ln.E_total_log, ln.E_total_exp,
               ln.splitting, quantum.w_exp_shift_as_printed(basis, ln.n)]
        if oracle:
            devs = []
            for form, val in ((Formulation.LOG, ln.dE_log), (Formulation.EXP, ln.dE_exp)):
                o = quantum.w_correction_oracle(basis, form, ln.n)
                devs.append(abs(val - o) / abs(val) if val != 0 else abs(o))
            worst = max(worst, *devs)
            row += devs
        table.add(*row)
    table.meta = {"hbar": basis.hbar, "m": basis.params.m, "g": basis.params.g,
                  "alpha": basis.params.alpha, "l_g": basis.l_g,
                  "warnings": [str(w.message) for w in caught]}
    path = table.write(cfg["out_dir"], cfg["format"])
    if svg:
        _write_svg(cfg["out_dir"], "spectrum", level_diagram(
            [("E0", [ln.E0 for ln in lines]),
             ("E0 + dE_log", [ln.E_total_log for ln in lines]),
             ("E0 + dE_exp", [ln.E_total_exp for ln in lines])],
            title="bouncer levels"))
    ok = worst <= 1e-6
    print(json.dumps({"output": str(path), "levels": len(lines), "max_oracle_dev": worst, "passed": ok}))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_thermo(cfg, svg=False) -> int:
    e = _ensemble(cfg, cfg["beta"])
    pl = statmech.thermo_point(Formulation.LOG, e)
    pe = statmech.thermo_point(Formulation.EXP, e)
    devs = []
    for f, p in ((Formulation.LOG, pl), (Formulation.EXP, pe)):
        devs.append(abs(p.log_z - statmech.log_partition_oracle(f, e)))
    for f, p in ((Formulation.LOG, pl), (Formulation.EXP, pe)):
        devs.append(abs(p.u - statmech.internal_energy_oracle(f, e)) / max(abs(p.u), 1e-300))
    for f, p in ((Formulation.LOG, pl), (Formulation.EXP, pe)):
        devs.append(abs(p.c_v - statmech.heat_capacity_oracle(f, e)) / max(abs(p.c_v), 1e-300))
    tols = (1e-8, 1e-8, 1e-6, 1e-6, 1e-5, 1e-5)
    flag = any(not d <= t for d, t in zip(devs, tols))
    table = Table("thermo", ["beta", "logZ1", "logZ2", "U1", "U2", "CV1", "CV2", "abs_dCV",
                             "logZ1_oracle_dev", "logZ2_oracle_dev", "U1_oracle_dev", "U2_oracle_dev",
                             "CV1_oracle_dev", "CV2_oracle_dev", "oracle_flag"])
    table.add(e.beta, pl.log_z, pe.log_z, pl.u, pe.u, pl.c_v, pe.c_v, abs(pe.c_v - pl.c_v), *devs, flag)
    table.meta = {"index_1": "log", "index_2": "exp"}
    path = table.write(cfg["out_dir"], cfg["format"])
    print(json.dumps({"output": str(path), "oracle_flag": flag}))
    return EXIT_FAIL if flag else EXIT_OK


def cmd_sweep(cfg, svg=False) -> int:
    lo, hi = cfg["beta_min"], cfg["beta_max"]
    if not (0 < lo < hi) or cfg["points_per_decade"] < 1:
        raise UsageError("need 0 < beta-min < beta-max and points-per-decade >= 1")
    grid = statmech.default_beta_grid(lo, hi, cfg["points_per_decade"])
    res = statmech.sweep_beta(_ensemble(cfg, grid[0]), grid)
    table = Table("sweep", ["beta", "logZ1", "logZ2", "U1", "U2", "CV1", "CV2", "abs_dCV",
                            "CV2_minus_CV1", "cv_oracle_dev", "oracle_flag"])
    for r in res.rows:
        table.add(r.beta, r.log_z_log, r.log_z_exp, r.u_log, r.u_exp, r.cv_log, r.cv_exp,
                  r.abs_delta_cv, r.delta_cv, r.oracle_dev, r.oracle_flag)
    table.meta = {"index_1": "log", "index_2": "exp", "crossovers": res.crossovers,
                  "flagged": res.flagged}
    path = table.write(cfg["out_dir"], cfg["format"])
    if svg:
        _write_svg(cfg["out_dir"], "sweep", line_plot(
            [("|CV1 - CV2|", table.column("beta"), table.column("abs_dCV"))],
            title="difference of the heat capacities", xlabel="beta", ylabel="|dC_V|",
            logx=True, logy=True))
    for b in res.crossovers:
        print(f"crossover beta* = {b:.10g}")
    print(json.dumps({"output": str(path), "crossovers": res.crossovers, "flagged": res.flagged}))
    return EXIT_FAIL if res.flagged else EXIT_OK


def cmd_verify(cfg, checks=None, criteria=None, list_only=False) -> int:
    if list_only:
        for c in verify.CHECKS:
            print(f"{c.name}\tcriterion {c.criterion}\ttolerance {c.tolerance:g}")
        return EXIT_OK
    try:
        report = verify.run_checks(checks, criteria)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    out_dir = cfg["out_dir"]
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "verify.json"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    for c in report["checks"]:
        status = "PASS" if c["passed"] else "FAIL"
        obs = "nan" if c["observed"] is None else f"{c['observed']:.3e}"
        print(f"{status}  {c['name']:<36} observed {obs}  tolerance {c['tolerance']:.1e}")
    print(f"report: {path}  ({report['runtime_s']:.1f} s)")
    return EXIT_OK if report["passed"] else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        cfg = resolve(args)
        if args.command == "verify":
            return cmd_verify(cfg, args.check, args.criterion, args.list)
        fn = {"simulate": cmd_simulate, "spectrum": cmd_spectrum,
              "thermo": cmd_thermo, "sweep": cmd_sweep}[args.command]
        return fn(cfg, getattr(args, "svg", False))
    except UsageError as exc:
        print(f"dragfall {args.command}: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, IntegrationError, ArithmeticError, RuntimeError, ValueError) as exc:
        print(f"dragfall {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
