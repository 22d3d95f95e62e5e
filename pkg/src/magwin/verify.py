"""Verification suite: quantitative checks tying the solvers together.

Each check returns a :class:`CheckResult` with a pass flag and a details
dictionary; :func:`run_suite` executes the fast or full list and prints one
pass/fail line per check.  The checks are deliberately adversarial: a
PRESENT verdict inside a certified-empty window region is a hard failure,
because a truncated eigenvalue below the threshold is a variational
certificate of discrete spectrum.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.optimize import brentq

from .bessel import j0_first_zero
from .bounds import (
    best_hardy_constant_ab,
    c3_transverse,
    critical_length_ab,
    critical_length_compact,
    hardy_constants_for_field,
    kappa,
    presence_condition,
    tail_quadrature_identity,
)
from .fields import FieldSpec, bump_amplitude_for_flux
from .gauge import ab_gauge, compactify_gauge, line_integral_gauge, sup_A2, zero_gauge
from .geometry import HEIGHT, StripGeometry
from .onedim import (
    assemble_operator_1d,
    build_rho,
    lowest_eigenvalue_1d,
    verify_window_inequality,
)
from .spectral2d import (
    assemble_operator,
    build_grid,
    diamagnetic_defect,
    discrete_spectrum_probe,
    form_inequality_check,
    lambda_window,
    lowest_eigenpairs,
    solve_configuration,
)

NU0_REFERENCE = 2.404825557695773


@dataclass
class CheckResult:
    name: str
    passed: bool
    seconds: float
    details: dict = dc_field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed,
                "seconds": round(self.seconds, 2), "details": self.details}


def _bump(center, support_radius, flux) -> FieldSpec:
    return FieldSpec(kind="compact_bump", center=center,
                     amplitude=bump_amplitude_for_flux(flux, support_radius),
                     support_radius=support_radius)


#: compact-field configurations used by the certificate and reduction checks;
#: the ball on the flux-free side contributes kappa = 0
COMPACT_CONFIGS = (
    {"name": "one_sided_mid", "field": _bump((-3.0, HEIGHT / 2.0), 0.5, 0.3),
     "p_minus": (-3.0, HEIGHT / 2.0), "p_plus": (3.0, HEIGHT / 2.0), "R": 1.0},
    {"name": "off_axis", "field": _bump((-2.5, 1.2), 0.5, 0.5),
     "p_minus": (-2.5, 1.2), "p_plus": (2.5, 1.2), "R": 1.0},
    {"name": "wide_bump", "field": _bump((-4.0, HEIGHT / 2.0), 0.8, 0.45),
     "p_minus": (-4.0, HEIGHT / 2.0), "p_plus": (4.0, HEIGHT / 2.0), "R": 1.2},
)

AB_CONFIG = {"name": "ab_half_flux",
             "field": FieldSpec(kind="aharonov_bohm", center=(-2.0, HEIGHT / 2.0),
                                flux=0.5)}


def compact_certificate_data(cfg: dict) -> dict:
    """Hardy constants, critical length and the 0.9x test window for a config."""
    cs_m = hardy_constants_for_field(cfg["field"], cfg["p_minus"], cfg["R"])
    cs_p = hardy_constants_for_field(cfg["field"], cfg["p_plus"], cfg["R"])
    km, _ = kappa(cs_m.c, abs(cfg["p_minus"][0]))
    kp, _ = kappa(cs_p.c, abs(cfg["p_plus"][0]))
    crit = (km + kp) / 12.0
    l = 0.9 * crit
    report = critical_length_compact(l, cs_m, cfg["p_minus"], cs_m.c > 0.0,
                                     cs_p, cfg["p_plus"], cs_p.c > 0.0)
    return {"cs_minus": cs_m, "cs_plus": cs_p, "critical_length": crit,
            "l": l, "report": report}


def ab_certificate_data(cfg: dict) -> dict:
    field = cfg["field"]
    cs = best_hardy_constant_ab(field.center, field.flux, r_max=1.5)
    k, _ = kappa(cs.c, abs(field.center[0]))
    crit = k / 6.0
    l = 0.9 * crit
    report = critical_length_ab(l, cs, field.center)
    return {"cs": cs, "critical_length": crit, "l": l, "report": report}


def check_essential_spectrum_edge(tol: float = 1e-9, seed: int = 0) -> CheckResult:
    """No field, no window: excess over 1 matches (pi/(2L))^2 and scales 4x."""
    t0 = time.time()
    h = 0.025
    excess = {}
    for L in (10.0, 20.0):
        res = solve_configuration(0.0, L, h, k=1, tol=tol, seed=seed, symmetric=True)
        excess[L] = float(res.eigenvalues[0]) - 1.0
    rel = excess[10.0] / (math.pi / 20.0) ** 2 - 1.0
    ratio = excess[10.0] / excess[20.0]
    passed = abs(rel) <= 0.05 and 3.2 <= ratio <= 4.8
    return CheckResult("essential_spectrum_edge", passed, time.time() - t0, {
        "excess_L10": excess[10.0], "expected_L10": (math.pi / 20.0) ** 2,
        "relative_error": rel, "halving_ratio": ratio,
    })


def check_window_binding_quartic(seed: int = 0) -> CheckResult:
    """Every window binds; the gap 1 - lambda(l) scales like l^4."""
    t0 = time.time()
    ls = (0.1, 0.15, 0.2, 0.3)
    gaps, all_below, per_l = [], True, []
    for l in ls:
        r = lambda_window(l, seed=seed)
        rung_ok = all(rung["gap"] > r["eps_num"] for rung in r["rungs"])
        all_below = all_below and rung_ok
        gaps.append(r["gap"])
        per_l.append({"l": l, "L": r["L"], "gap": r["gap"],
                      "eps_num": r["eps_num"], "below_threshold": rung_ok})
    slope, logc = np.polyfit(np.log(ls), np.log(gaps), 1)
    passed = all_below and 3.5 <= slope <= 4.5
    return CheckResult("window_binding_quartic", passed, time.time() - t0, {
        "slope": float(slope), "prefactor": float(math.exp(logc)),
        "per_l": per_l,
    })


def check_compact_absence_certificates(tol: float = 1e-8, seed: int = 0) -> CheckResult:
    """Certified-empty compact configurations must never probe PRESENT."""
    t0 = time.time()
    rows, passed = [], True
    for cfg in COMPACT_CONFIGS:
        data = compact_certificate_data(cfg)
        gauge = line_integral_gauge(cfg["field"])
        probe = discrete_spectrum_probe(data["l"], field=cfg["field"], gauge=gauge,
                                        k=4, tol=tol, seed=seed)
        no_present = (probe.verdict == "NOT_FOUND"
                      and all(not r.below_threshold for r in probe.rungs))
        certified = data["report"].verdict_absence == "certified_empty"
        passed = passed and no_present and certified
        rows.append({"config": cfg["name"], "l": data["l"],
                     "critical_length": data["critical_length"],
                     "certified": certified, "verdict": probe.verdict})
    return CheckResult("compact_absence_certificates", passed, time.time() - t0,
                       {"configs": rows})


def check_ab_absence_certificate(tol: float = 1e-8, seed: int = 0) -> CheckResult:
    """Same as the compact check for the half-flux Aharonov-Bohm point."""
    t0 = time.time()
    data = ab_certificate_data(AB_CONFIG)
    field = AB_CONFIG["field"]
    probe = discrete_spectrum_probe(data["l"], field=field, gauge=ab_gauge(field),
                                    k=4, tol=tol, seed=seed)
    no_present = (probe.verdict == "NOT_FOUND"
                  and all(not r.below_threshold for r in probe.rungs))
    certified = data["report"].verdict_absence == "certified_empty"
    return CheckResult("ab_absence_certificate", no_present and certified,
                       time.time() - t0, {
                           "l": data["l"], "critical_length": data["critical_length"],
                           "certified": certified, "verdict": probe.verdict,
                           "strict": data["report"].strict,
                       })


def square_well_ground_state(depth: float, half_width: float) -> float:
    """Ground-state energy of -v'' - depth*[|x| <= half_width] by shooting.

    The even bound state solves k tan(k l) = sqrt(-E) with k^2 = depth + E.
    """
    def f(kap):
        k = math.sqrt(depth - kap * kap)
        return k * math.tan(k * half_width) - kap
    kap = brentq(f, 1e-12, math.sqrt(depth) - 1e-12, xtol=1e-14)
    return -kap * kap


def check_onedim_reduction(seed: int = 0) -> CheckResult:
    """Reduced operator non-negative on certified configs; oracle match at l=0.5."""
    t0 = time.time()
    rows, passed = [], True
    for cfg in COMPACT_CONFIGS:
        data = compact_certificate_data(cfg)
        rho = build_rho("compact", data["cs_minus"].c, cfg["p_minus"][0],
                        data["cs_plus"].c, cfg["p_plus"][0])
        L1 = max(40.0, 10.0 * abs(cfg["p_minus"][0]))
        h = max(min(data["l"], 1.0) / 40.0, 5e-3)
        rep = verify_window_inequality(rho, data["l"], L1, h)
        ok = rep.min_eigenvalue >= -10.0 * rep.h**2
        passed = passed and ok
        rows.append({"config": cfg["name"], "min_eigenvalue": rep.min_eigenvalue,
                     "threshold": -10.0 * rep.h**2, "ok": ok})
    ab = ab_certificate_data(AB_CONFIG)
    rho_ab = build_rho("aharonov_bohm", ab["cs"].c, AB_CONFIG["field"].center[0])
    rep = verify_window_inequality(rho_ab, ab["l"], 40.0, 5e-3)
    ok = rep.min_eigenvalue >= -10.0 * rep.h**2
    passed = passed and ok
    rows.append({"config": AB_CONFIG["name"], "min_eigenvalue": rep.min_eigenvalue,
                 "threshold": -10.0 * rep.h**2, "ok": ok})

    oracle = square_well_ground_state(1.5, 0.5)
    vals = []
    for h in (0.0125, 0.00625):
        op = assemble_operator_1d(None, 0.5, 25.0, h)
        vals.append(lowest_eigenvalue_1d(op))
    extrapolated = (4.0 * vals[1] - vals[0]) / 3.0
    oracle_err = abs(extrapolated - oracle)
    passed = passed and oracle_err <= 1e-6
    return CheckResult("onedim_reduction", passed, time.time() - t0, {
        "configs": rows, "oracle": oracle, "extrapolated": extrapolated,
        "oracle_error": oracle_err,
    })


def check_presence_end_to_end(tol: float = 1e-8, seed: int = 0) -> CheckResult:
    """Weak bump, compactified gauge, l = 1: presence condition and PRESENT verdict."""
    t0 = time.time()
    field = _bump((-3.0, HEIGHT / 2.0), 0.5, 0.02)
    gauge = compactify_gauge(line_integral_gauge(field), 3.5)
    sup2 = sup_A2(gauge, (-8.1, 8.1))
    lw = lambda_window(1.0, seed=seed)
    condition = presence_condition(lw["lambda"], sup2)
    probe = discrete_spectrum_probe(1.0, field=field, gauge=gauge,
                                    k=2, tol=tol, seed=seed)
    below = any(r.below_threshold for r in probe.rungs)
    passed = condition and probe.verdict == "PRESENT" and below
    return CheckResult("presence_end_to_end", passed, time.time() - t0, {
        "lambda_window": lw["lambda"], "sup_A_sq": sup2,
        "condition_sum": lw["lambda"] + sup2, "verdict": probe.verdict,
    })


def check_hardy_form_and_diamagnetic(tol: float = 1e-8, seed: int = 0) -> CheckResult:
    """Randomized trial functions respect the Hardy form bound; eigenvectors
    respect the edgewise diamagnetic inequality."""
    t0 = time.time()
    margins, defects = [], []
    for cfg in COMPACT_CONFIGS:
        data = compact_certificate_data(cfg)
        rho = build_rho("compact", data["cs_minus"].c, cfg["p_minus"][0],
                        data["cs_plus"].c, cfg["p_plus"][0])
        geom = StripGeometry(half_width_l=data["l"], truncation_L=20.0)
        grid = build_grid(geom, 0.05)
        op = assemble_operator(geom, cfg["field"], line_integral_gauge(cfg["field"]), grid)
        rep = form_inequality_check(op, rho, n_trials=50, seed=seed)
        margins.append(rep["min_margin"])
        res = lowest_eigenpairs(op, k=2, tol=tol, seed=seed, keep_vectors=True)
        for i in range(res.eigenvectors.shape[1]):
            defects.append(diamagnetic_defect(op, res.eigenvectors[:, i]))
    min_margin = min(margins)
    max_defect = max(defects)
    passed = min_margin >= -1e-6 and max_defect <= 1e-10
    return CheckResult("hardy_form_and_diamagnetic", passed, time.time() - t0, {
        "min_margin": min_margin, "max_diamagnetic_defect": max_defect,
        "n_trials": 50, "n_configs": len(COMPACT_CONFIGS),
    })


def check_exact_identities() -> CheckResult:
    """Bessel zero, tail quadrature, midline c3, and the trivial-flux branch."""
    t0 = time.time()
    nu0 = j0_first_zero()
    nu0_err = abs(nu0 - NU0_REFERENCE)
    quad_val = tail_quadrature_identity()
    quad_err = abs(quad_val - math.pi * math.log(2.0))
    c3_mid = c3_transverse(HEIGHT / 2.0)
    flat = FieldSpec(kind="compact_bump", center=(-3.0, HEIGHT / 2.0),
                     amplitude=0.0, support_radius=0.5)
    cs = hardy_constants_for_field(flat, (-3.0, HEIGHT / 2.0), 1.0)
    passed = (nu0_err <= 1e-12 and quad_err <= 1e-6
              and c3_mid == 3.0 and cs.c == 0.0)
    return CheckResult("exact_identities", passed, time.time() - t0, {
        "nu0": nu0, "nu0_error": nu0_err,
        "tail_quadrature": quad_val, "tail_quadrature_error": quad_err,
        "c3_midline": c3_mid, "trivial_flux_constant": cs.c,
    })


def check_gauge_covariance(tol: float = 1e-8, seed: int = 0) -> CheckResult:
    """Spectra agree across gauges of the same field and for integer AB flux."""
    t0 = time.time()
    l, L, h, k = 0.5, 10.0, 0.05, 3
    field = _bump((-2.0, HEIGHT / 2.0), 0.5, 0.3)
    base = line_integral_gauge(field)
    comp = compactify_gauge(base, 2.5)

    def hfun(x1, x2):
        return 0.2 * np.sin(x1) * np.sin(x2)

    def grad_hfun(x1, x2):
        return 0.2 * np.cos(x1) * np.sin(x2), 0.2 * np.sin(x1) * np.cos(x2)

    shifted = base.shifted(hfun, grad_hfun)
    spectra = {}
    for name, gauge in (("base", base), ("compactified", comp), ("shifted", shifted)):
        res = solve_configuration(l, L, h, field=field, gauge=gauge,
                                  k=k, tol=tol, seed=seed)
        spectra[name] = res.eigenvalues
    dev_comp = float(np.max(np.abs(spectra["base"] - spectra["compactified"])))
    dev_shift = float(np.max(np.abs(spectra["base"] - spectra["shifted"])))

    ab_field = FieldSpec(kind="aharonov_bohm", center=(-2.0, HEIGHT / 2.0), flux=1.0)
    geom = StripGeometry(half_width_l=l, truncation_L=L)
    grid = build_grid(geom, h, ab_point=ab_field.center)
    op_ab = assemble_operator(geom, ab_field, ab_gauge(ab_field), grid)
    op_zero = assemble_operator(geom, None, zero_gauge(), grid)
    vals_ab = lowest_eigenpairs(op_ab, k=k, tol=tol, seed=seed).eigenvalues
    vals_zero = lowest_eigenpairs(op_zero, k=k, tol=tol, seed=seed).eigenvalues
    dev_ab = float(np.max(np.abs(vals_ab - vals_zero)))

    bound = 10.0 * tol
    passed = max(dev_comp, dev_shift, dev_ab) <= bound
    return CheckResult("gauge_covariance", passed, time.time() - t0, {
        "deviation_compactified": dev_comp, "deviation_shifted": dev_shift,
        "deviation_ab_integer_flux": dev_ab, "bound": bound,
    })


FAST_CHECKS = (
    check_essential_spectrum_edge,
    check_onedim_reduction,
    check_exact_identities,
)

FULL_CHECKS = (
    check_essential_spectrum_edge,
    check_window_binding_quartic,
    check_compact_absence_certificates,
    check_ab_absence_certificate,
    check_onedim_reduction,
    check_presence_end_to_end,
    check_hardy_form_and_diamagnetic,
    check_exact_identities,
    check_gauge_covariance,
)


def run_suite(level: str = "full", stream=None) -> list[CheckResult]:
    """Run the fast or full check list, printing one pass/fail line per check."""
    if level not in ("fast", "full"):
        raise ValueError("level must be 'fast' or 'full'")
    checks = FAST_CHECKS if level == "fast" else FULL_CHECKS
    results = []
    for fn in checks:
        r = fn()
        results.append(r)
        line = f"{'PASS' if r.passed else 'FAIL'} {r.name} ({r.seconds:.1f}s)"
        if stream is not None:
            print(line, file=stream)
        else:
            print(line)
    return results


def suite_report(results: list[CheckResult]) -> dict:
    return {
        "passed": all(r.passed for r in results),
        "checks": [r.to_dict() for r in results],
    }


def suite_report_json(results: list[CheckResult], **kw) -> str:
    return json.dumps(suite_report(results), **kw)
