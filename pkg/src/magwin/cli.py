"""Command-line front end: bounds, spectrum, onedim, sweep, verify.

Every command reads a JSON config, writes JSON/CSV results plus rendered
figures into the output directory, and embeds the fully resolved config and
a content hash in each JSON payload.  When no seed is given, one is derived
from the config hash so that reruns are reproducible.

Exit codes: 0 success, 2 config or precondition error, 3 solver error.
The sweep command runs rows in a process pool sized by the MAGWIN_WORKERS
environment variable (default 1).
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import hashlib
import json
import math
import os
import sys
from pathlib import Path

from .bounds import (
    BoundReport,
    PreconditionError,
    best_hardy_constant_ab,
    critical_length_ab,
    critical_length_compact,
    hardy_constants_for_field,
    kappa,
)
from .fields import FieldError, FieldSpec, bump_amplitude_for_flux, flux_profile, mu_profile
from .gauge import GaugeError, gauge_for_field
from .geometry import GeometryError, HEIGHT
from .onedim import SolverError, build_rho, verify_window_inequality
from .spectral2d import (
    DEFAULT_LADDER,
    discrete_spectrum_probe,
    solve_configuration,
)
from .verify import FAST_CHECKS, FULL_CHECKS, run_suite, suite_report

CONFIG_ERRORS = (PreconditionError, GeometryError, FieldError, GaugeError,
                 ValueError, KeyError, TypeError, FileNotFoundError,
                 json.JSONDecodeError)


def _canonical(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _config_hash(config: dict) -> str:
    return hashlib.sha256(_canonical(config).encode()).hexdigest()


def _resolve_seed(seed: int | None, config: dict) -> int:
    if seed is not None:
        return seed
    return int(_config_hash(config), 16) % 2**32


def _emit_json(path: Path, payload: dict) -> None:
    payload = dict(payload)
    payload["content_hash"] = hashlib.sha256(_canonical(payload).encode()).hexdigest()
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _load_config(path: str | None) -> dict:
    if path is None:
        raise ValueError("--config is required for this command")
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config must be a JSON object")
    return cfg


def _parse_ladder(spec: str | None):
    if spec is None:
        return None
    rungs = []
    for part in spec.split(","):
        Ls, hs = part.split(":")
        rungs.append((float(Ls), float(hs)))
    if not rungs:
        raise ValueError("empty ladder spec")
    return tuple(rungs)


def _field_from_config(cfg: dict) -> FieldSpec | None:
    d = cfg.get("field")
    return FieldSpec.from_dict(d) if d else None


def _gauge_from_config(cfg: dict, field: FieldSpec | None):
    if field is None:
        return None
    return gauge_for_field(field, kind=cfg.get("gauge", "auto"), b=cfg.get("b"))


def _outdir(args) -> Path:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _compact_bound_report(cfg: dict, field: FieldSpec | None) -> tuple[BoundReport, dict]:
    p_minus = tuple(cfg["p_minus"])
    p_plus = tuple(cfg["p_plus"])
    R = float(cfg["R"])
    l = float(cfg["window_l"])
    if field is not None:
        cs_m = hardy_constants_for_field(field, p_minus, R)
        cs_p = hardy_constants_for_field(field, p_plus, R)
    else:
        zero = FieldSpec(kind="compact_bump", center=(p_minus[0], HEIGHT / 2.0),
                         amplitude=0.0, support_radius=min(R, 1.0) / 2.0)
        cs_m = hardy_constants_for_field(zero, p_minus, R)
        cs_p = hardy_constants_for_field(zero, p_plus, R)
    report = critical_length_compact(l, cs_m, p_minus, cs_m.c > 0.0,
                                     cs_p, p_plus, cs_p.c > 0.0)
    profiles = {}
    if field is not None:
        for label, p in (("minus", p_minus), ("plus", p_plus)):
            fp = flux_profile(field, p, R)
            profiles[label] = (fp, mu_profile(fp))
    return report, profiles


def cmd_bounds(args) -> int:
    cfg = _load_config(args.config)
    out = _outdir(args)
    field = _field_from_config(cfg)
    variant = cfg.get("variant", "compact")
    profiles = {}
    if variant == "compact":
        report, profiles = _compact_bound_report(cfg, field)
    elif variant == "aharonov_bohm":
        if field is None or field.kind != "aharonov_bohm":
            raise ValueError("aharonov_bohm variant needs an aharonov_bohm field")
        cs = best_hardy_constant_ab(field.center, field.flux,
                                    r_max=float(cfg.get("R_max", 1.5)))
        report = critical_length_ab(float(cfg["window_l"]), cs, field.center)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    payload = {"command": "bounds", "resolved_config": cfg,
               "report": report.to_dict()}
    _emit_json(out / "bounds.json", payload)
    if profiles:
        with open(out / "flux_profiles.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["ball", "r", "flux", "mu"])
            for label, (fp, mp) in profiles.items():
                for r, f, m in zip(fp.radii, fp.values, mp.values):
                    w.writerow([label, repr(float(r)), repr(float(f)), repr(float(m))])
        from .plots import plot_flux_profiles
        plot_flux_profiles(profiles, out / "flux_profiles.png")
    print(f"verdict: {report.verdict_absence} "
          f"(l={report.window_l:.6g}, critical={report.critical_length:.6g})")
    return 0


def cmd_spectrum(args) -> int:
    cfg = _load_config(args.config)
    out = _outdir(args)
    tol = args.tol if args.tol is not None else float(cfg.get("tol", 1e-9))
    seed = _resolve_seed(args.seed, cfg)
    field = _field_from_config(cfg)
    gauge = _gauge_from_config(cfg, field)
    l = float(cfg.get("window_l", 0.0))
    ladder = _parse_ladder(args.ladder) or cfg.get("ladder")
    if ladder is not None:
        ladder = tuple((float(L), float(h)) for L, h in ladder)
        probe = discrete_spectrum_probe(l, field=field, gauge=gauge,
                                        ladder=ladder, k=int(cfg.get("k", 4)),
                                        tol=tol, seed=seed)
        payload = {"command": "spectrum", "resolved_config": cfg, "seed": seed,
                   "probe": probe.to_dict()}
        _emit_json(out / "spectrum.json", payload)
        print(f"verdict: {probe.verdict}")
        return 0
    res = solve_configuration(
        l, float(cfg["L"]), float(cfg["h"]), field=field, gauge=gauge,
        k=int(cfg.get("k", 4)), tol=tol, seed=seed,
        symmetric=bool(cfg.get("symmetric", False)),
        keep_vectors=bool(cfg.get("keep_vectors", False)),
    )
    payload = {"command": "spectrum", "resolved_config": cfg, "seed": seed,
               "result": res.to_dict()}
    _emit_json(out / "spectrum.json", payload)
    if res.eigenvectors is not None:
        import numpy as np

        np.savetxt(out / "eigenvector0.csv",
                   np.column_stack([np.abs(res.eigenvectors[:, 0])]),
                   delimiter=",", header="abs_u", comments="")
        from .geometry import StripGeometry
        from .plots import plot_eigenvector
        from .spectral2d import assemble_operator, build_grid

        geom = StripGeometry(half_width_l=l, truncation_L=float(cfg["L"]))
        ab_point = field.center if (field is not None and field.kind == "aharonov_bohm") else None
        grid = build_grid(geom, float(cfg["h"]),
                          symmetric=bool(cfg.get("symmetric", False)),
                          ab_point=ab_point)
        op = assemble_operator(geom, field, gauge, grid)
        plot_eigenvector(op, res.eigenvectors[:, 0], float(res.eigenvalues[0]),
                         out / "eigenvector0.png")
    below = ", ".join(f"{v:.8f}" for v in res.below_threshold)
    print(f"eigenvalues below threshold: [{below}]" if below
          else "no eigenvalue below threshold")
    return 0


def cmd_onedim(args) -> int:
    cfg = _load_config(args.config)
    out = _outdir(args)
    tol = args.tol if args.tol is not None else float(cfg.get("tol", 1e-10))
    if cfg.get("rho") is None:
        rho = None
    else:
        r = cfg["rho"]
        rho = build_rho(r.get("variant", "compact"),
                        float(r["c_minus"]), float(r["p1_minus"]),
                        float(r.get("c_plus", 0.0)),
                        float(r.get("p1_plus", math.inf)))
    l = float(cfg["window_l"])
    L1 = float(cfg.get("L1", 40.0))
    h = float(cfg.get("h", max(min(l, 1.0) / 40.0, 5e-3) if l > 0 else 0.025))
    rep = verify_window_inequality(rho, l, L1, h, tol=tol)
    rep.minimizer_to_csv(out / "minimizer.csv")
    from .plots import plot_minimizer
    plot_minimizer(rep, rho, out / "minimizer.png")
    payload = {"command": "onedim", "resolved_config": cfg,
               "report": rep.to_dict(minimizer_csv_path="minimizer.csv")}
    _emit_json(out / "onedim.json", payload)
    print(f"min eigenvalue {rep.min_eigenvalue:.6e} ({rep.certified_sign})")
    return 0


def _sweep_row(task: dict) -> dict:
    """One sweep row; exceptions are captured so the sweep continues."""
    row = {"window_l": task["l"], "flux": task["flux"]}
    try:
        template = task["field_template"]
        field = None
        if template:
            field = FieldSpec.from_dict(template)
            if field.kind in ("compact_bump", "uniform_disk"):
                if field.kind == "compact_bump":
                    amp = bump_amplitude_for_flux(task["flux"], field.support_radius)
                else:
                    amp = 2.0 * task["flux"] / field.support_radius**2
                field = FieldSpec(kind=field.kind, center=field.center,
                                  amplitude=amp, support_radius=field.support_radius)
            else:
                field = FieldSpec(kind="aharonov_bohm", center=field.center,
                                  flux=task["flux"])
        crit = None
        if field is not None and task.get("p_minus") is not None:
            p_minus, p_plus, R = task["p_minus"], task["p_plus"], task["R"]
            if field.kind == "aharonov_bohm":
                cs = best_hardy_constant_ab(field.center, field.flux, r_max=R)
                k, _ = kappa(cs.c, abs(field.center[0]))
                crit = k / 6.0
            else:
                cs_m = hardy_constants_for_field(field, tuple(p_minus), R)
                cs_p = hardy_constants_for_field(field, tuple(p_plus), R)
                km, _ = kappa(cs_m.c, abs(p_minus[0]))
                kp, _ = kappa(cs_p.c, abs(p_plus[0]))
                crit = (km + kp) / 12.0
        gauge = gauge_for_field(field, kind=task.get("gauge", "auto")) if field else None
        probe = discrete_spectrum_probe(task["l"], field=field, gauge=gauge,
                                        ladder=task["ladder"], k=task["k"],
                                        tol=task["tol"], seed=task["seed"])
        lowest = min(float(r.eigenvalues[0]) for r in probe.rungs)
        certified = crit is not None and task["l"] <= crit
        row.update({
            "verdict": probe.verdict,
            "lowest_eigenvalue": lowest,
            "critical_length": crit,
            "violation": bool(certified and probe.verdict == "PRESENT"),
        })
    except Exception as exc:  # per-row failures must not kill the sweep
        row.update({"verdict": "ERROR", "lowest_eigenvalue": None,
                    "critical_length": None, "violation": None,
                    "error": f"{type(exc).__name__}: {exc}"})
    return row


def cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    out = _outdir(args)
    tol = args.tol if args.tol is not None else float(cfg.get("tol", 1e-8))
    seed = _resolve_seed(args.seed, cfg)
    ladder = _parse_ladder(args.ladder) or cfg.get("ladder") or DEFAULT_LADDER
    ladder = tuple((float(L), float(h)) for L, h in ladder)
    window_ls = [float(v) for v in cfg["window_ls"]]
    flux_values = [float(v) for v in cfg.get("flux_values", [0.0])]
    tasks = [{
        "l": l, "flux": flux, "field_template": cfg.get("field"),
        "p_minus": cfg.get("p_minus"), "p_plus": cfg.get("p_plus"),
        "R": float(cfg.get("R", 1.0)), "gauge": cfg.get("gauge", "auto"),
        "ladder": ladder, "k": int(cfg.get("k", 4)), "tol": tol, "seed": seed,
    } for l in window_ls for flux in flux_values]
    workers = int(os.environ.get("MAGWIN_WORKERS", "1"))
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_row, tasks))
    else:
        rows = [_sweep_row(t) for t in tasks]
    fieldnames = ["window_l", "flux", "verdict", "lowest_eigenvalue",
                  "critical_length", "violation", "error"]
    with open(out / "sweep.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fieldnames)
        w.writeheader()
        for row in rows:
            w.writerow({k: row.get(k) for k in fieldnames})
    payload = {"command": "sweep", "resolved_config": cfg, "seed": seed,
               "n_rows": len(rows),
               "n_violations": sum(1 for r in rows if r.get("violation")),
               "n_errors": sum(1 for r in rows if r["verdict"] == "ERROR")}
    _emit_json(out / "sweep.json", payload)
    from .plots import plot_sweep
    plot_sweep(rows, "window_l", "flux", out / "sweep.png")
    print(f"{len(rows)} rows, {payload['n_violations']} violations, "
          f"{payload['n_errors']} errors")
    return 0 if payload["n_violations"] == 0 else 1


def cmd_verify(args) -> int:
    level = args.level or "fast"
    results = run_suite(level)
    report = suite_report(results)
    if args.out:
        out = _outdir(args)
        _emit_json(out / "verify.json",
                   {"command": "verify", "level": level, **report})
    return 0 if report["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magwin",
        description="Spectral analysis of a Dirichlet strip with a magnetic "
                    "Neumann window.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, needs_config in (
        ("bounds", cmd_bounds, True),
        ("spectrum", cmd_spectrum, True),
        ("onedim", cmd_onedim, True),
        ("sweep", cmd_sweep, True),
        ("verify", cmd_verify, False),
    ):
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON config file", default=None)
        p.add_argument("--out", help="output directory", default=None)
        p.add_argument("--ladder", help="truncation ladder, e.g. 10:0.05,20:0.05",
                       default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--level", choices=("fast", "full"), default=None)
        p.set_defaults(fn=fn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SolverError as exc:
        print(json.dumps({"error": "solver", "message": str(exc)}), file=sys.stderr)
        return 3
    except CONFIG_ERRORS as exc:
        print(json.dumps({"error": "config",
                          "message": f"{type(exc).__name__}: {exc}"}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
