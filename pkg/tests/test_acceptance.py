"""Acceptance gate: nine quantitative criteria, one pass/fail line each.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines as they
complete.  The numerical checks live in :mod:`magwin.verify`; this module
pins their tolerances and reports them as individual tests.
"""

import time

import pytest

from magwin import verify


def _run(fn, label):
    t0 = time.time()
    result = fn()
    status = "PASS" if result.passed else "FAIL"
    print(f"\n[{status}] {label} ({time.time() - t0:.1f}s)")
    assert result.passed, result.details
    return result


def test_criterion_1_essential_spectrum_edge():
    # excess over 1 matches (pi/(2L))^2 within 5% at L=10; ratio in [3.2, 4.8]
    r = _run(verify.check_essential_spectrum_edge,
             "criterion 1: essential spectrum edge")
    assert abs(r.details["relative_error"]) <= 0.05
    assert 3.2 <= r.details["halving_ratio"] <= 4.8
    assert r.seconds < 60.0


def test_criterion_2_window_binding_quartic():
    # every l in {0.1, 0.15, 0.2, 0.3} binds below 1 - eps_num; slope 4 +- 0.5
    r = _run(verify.check_window_binding_quartic,
             "criterion 2: non-magnetic window binding, l^4 law")
    assert all(row["below_threshold"] for row in r.details["per_l"])
    assert 3.5 <= r.details["slope"] <= 4.5
    assert r.seconds < 600.0


def test_criterion_3_compact_absence_certificates():
    # l = 0.9 * critical length: NOT_FOUND on every rung, PRESENT is fatal
    r = _run(verify.check_compact_absence_certificates,
             "criterion 3: compact-field absence certificates")
    assert len(r.details["configs"]) >= 3
    for row in r.details["configs"]:
        assert row["certified"] and row["verdict"] == "NOT_FOUND"


def test_criterion_4_ab_absence_certificate():
    r = _run(verify.check_ab_absence_certificate,
             "criterion 4: Aharonov-Bohm absence certificate")
    assert r.details["strict"]
    assert r.details["verdict"] == "NOT_FOUND"


def test_criterion_5_onedim_reduction():
    # reduced operator nonnegative within -10 h^2; shooting oracle to 1e-6
    r = _run(verify.check_onedim_reduction, "criterion 5: 1-D reduction")
    assert r.details["oracle_error"] <= 1e-6
    for row in r.details["configs"]:
        assert row["min_eigenvalue"] >= row["threshold"]


def test_criterion_6_presence_end_to_end():
    # weak bump, compactified gauge, l = 1: condition < 1 and PRESENT
    r = _run(verify.check_presence_end_to_end,
             "criterion 6: presence of discrete spectrum end-to-end")
    assert r.details["condition_sum"] < 1.0
    assert r.details["verdict"] == "PRESENT"


def test_criterion_7_hardy_form_and_diamagnetic():
    r = _run(verify.check_hardy_form_and_diamagnetic,
             "criterion 7: Hardy form and diamagnetic inequality")
    assert r.details["min_margin"] >= -1e-6
    assert r.details["max_diamagnetic_defect"] <= 1e-10


def test_criterion_8_exact_identities():
    r = _run(verify.check_exact_identities, "criterion 8: exact identities")
    assert r.details["nu0_error"] <= 1e-12
    assert r.details["tail_quadrature_error"] <= 1e-6
    assert r.details["c3_midline"] == 3.0
    assert r.details["trivial_flux_constant"] == 0.0


def test_criterion_9_gauge_covariance():
    r = _run(verify.check_gauge_covariance, "criterion 9: gauge covariance")
    for key in ("deviation_compactified", "deviation_shifted",
                "deviation_ab_integer_flux"):
        assert r.details[key] <= r.details["bound"]
