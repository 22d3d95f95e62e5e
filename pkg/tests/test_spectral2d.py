import math

import numpy as np
import pytest

from magwin.fields import FieldSpec, bump_amplitude_for_flux
from magwin.gauge import ab_gauge, line_integral_gauge, zero_gauge
from magwin.geometry import HEIGHT, GeometryError, StripGeometry
from magwin.spectral2d import (
    GaugeConsistencyError,
    assemble_operator,
    auto_truncation_length,
    build_grid,
    diamagnetic_defect,
    discrete_spectrum_probe,
    discrete_threshold,
    eps_num,
    form_inequality_check,
    hermiticity_defect,
    lambda_window,
    lowest_eigenpairs,
    solve_configuration,
)

MID = HEIGHT / 2.0


def bump(flux=0.3, s=0.5, center=(-2.0, MID)):
    return FieldSpec(kind="compact_bump", center=center,
                     amplitude=bump_amplitude_for_flux(flux, s), support_radius=s)


class TestGrid:
    def test_window_corners_on_nodes(self):
        geom = StripGeometry(half_width_l=0.3, truncation_L=10.7)
        grid = build_grid(geom, 0.05)
        assert grid.flagged_window_edge
        assert np.min(np.abs(grid.xs - 0.3)) < 1e-12
        assert np.min(np.abs(grid.xs + 0.3)) < 1e-12

    def test_tiny_window_not_snapped(self):
        geom = StripGeometry(half_width_l=1e-4, truncation_L=10.0)
        grid = build_grid(geom, 0.05)
        assert grid.nx < 1000

    def test_ab_point_inside_cell(self):
        geom = StripGeometry(half_width_l=0.5, truncation_L=10.0)
        grid = build_grid(geom, 0.05, ab_point=(-2.0, MID))
        fx = (-2.0 - grid.x0) / grid.hx % 1.0
        fy = MID / grid.hy % 1.0
        assert 0.25 < fx < 0.75 and 0.25 < fy < 0.75

    def test_symmetric_rejects_ab_point(self):
        geom = StripGeometry(half_width_l=0.5, truncation_L=10.0)
        with pytest.raises(GeometryError):
            build_grid(geom, 0.05, symmetric=True, ab_point=(-2.0, MID))

    def test_threshold_formula(self):
        hy = 0.05
        assert discrete_threshold(hy) == pytest.approx(1.0 - hy**2 / 12.0, abs=1e-6)
        assert eps_num(10.0) == pytest.approx(3.0 * (math.pi / 20.0) ** 2)


class TestAssembly:
    def test_hermitian_with_field(self):
        geom = StripGeometry(half_width_l=0.5, truncation_L=5.0)
        grid = build_grid(geom, 0.1)
        field = bump()
        op = assemble_operator(geom, field, line_integral_gauge(field), grid)
        assert op.is_complex
        assert hermiticity_defect(op) == 0.0

    def test_zero_field_is_real(self):
        geom = StripGeometry(half_width_l=0.5, truncation_L=5.0)
        grid = build_grid(geom, 0.1)
        op = assemble_operator(geom, None, None, grid)
        assert not op.is_complex
        assert op.H.dtype == np.float64

    def test_gauge_field_mismatch_rejected(self):
        # declared field differs from the one generating the gauge
        geom = StripGeometry(half_width_l=0.5, truncation_L=5.0)
        grid = build_grid(geom, 0.1)
        declared = bump(flux=0.3)
        other = bump(flux=0.6)
        with pytest.raises(GaugeConsistencyError):
            assemble_operator(geom, declared, line_integral_gauge(other), grid)

    def test_separable_oracle_no_window(self):
        # Dirichlet box: the discrete ground state is known in closed form
        L, h = 5.0, 0.05
        res = solve_configuration(0.0, L, h, k=1, tol=1e-10, seed=0)
        hx, hy = res.hx, res.hy
        expected = ((2.0 - 2.0 * math.cos(math.pi * hx / (2.0 * L))) / hx**2
                    + (2.0 - 2.0 * math.cos(hy)) / hy**2)
        assert res.eigenvalues[0] == pytest.approx(expected, abs=1e-9)

    def test_window_binds(self):
        res = solve_configuration(0.5, 20.0, 0.05, k=1, seed=0, symmetric=True)
        assert res.eigenvalues[0] < res.threshold
        assert res.residuals[0] < 1e-8


class TestEigensolver:
    def test_deterministic_given_seed(self):
        a = solve_configuration(0.5, 10.0, 0.1, k=2, seed=3)
        b = solve_configuration(0.5, 10.0, 0.1, k=2, seed=3)
        assert np.array_equal(a.eigenvalues, b.eigenvalues)

    def test_symmetric_matches_full_domain(self):
        full = solve_configuration(0.5, 10.0, 0.05, k=1, seed=0)
        half = solve_configuration(0.5, 10.0, 0.05, k=1, seed=0, symmetric=True)
        assert half.eigenvalues[0] == pytest.approx(full.eigenvalues[0], abs=1e-8)

    def test_L_monotonicity(self):
        # enlarging the truncation never raises the lowest eigenvalues
        prev = None
        for L in (10.0, 20.0, 40.0):
            vals = solve_configuration(0.5, L, 0.05, k=2, seed=0,
                                       symmetric=True).eigenvalues
            if prev is not None:
                assert np.all(vals <= prev + 1e-9)
            prev = vals

    def test_adaptive_shift_agrees_with_zero_shift(self):
        a = solve_configuration(0.5, 20.0, 0.05, k=1, seed=0, symmetric=True)
        b = solve_configuration(0.5, 20.0, 0.05, k=1, seed=0, symmetric=True,
                                sigma=0.9)
        assert a.eigenvalues[0] == pytest.approx(b.eigenvalues[0], abs=1e-9)

    def test_infeasible_shift_falls_back(self):
        res = solve_configuration(0.5, 10.0, 0.1, k=1, seed=0, symmetric=True,
                                  sigma=2.0)
        ref = solve_configuration(0.5, 10.0, 0.1, k=1, seed=0, symmetric=True)
        assert res.eigenvalues[0] == pytest.approx(ref.eigenvalues[0], abs=1e-9)


class TestLambdaWindow:
    def test_monotone_in_l(self):
        a = lambda_window(0.3, L=40.0)
        b = lambda_window(0.5, L=40.0)
        assert b["lambda"] < a["lambda"] < 1.0

    def test_error_estimate_present(self):
        r = lambda_window(0.5, L=40.0)
        assert r["error_estimate"] < 2e-3
        assert len(r["rungs"]) == 2

    def test_needs_positive_window(self):
        with pytest.raises(ValueError):
            lambda_window(0.0)

    def test_auto_truncation_scales(self):
        assert auto_truncation_length(0.1) > auto_truncation_length(0.3) \
            > auto_truncation_length(1.0)


class TestProbe:
    def test_window_present_on_default_ladder(self):
        probe = discrete_spectrum_probe(0.5, tol=1e-8)
        assert probe.verdict == "PRESENT"

    def test_no_window_not_found(self):
        ladder = ((10.0, 0.05), (20.0, 0.05))
        probe = discrete_spectrum_probe(0.0, ladder=ladder, k=2, tol=1e-8)
        assert probe.verdict == "NOT_FOUND"
        assert all(not r.below_threshold for r in probe.rungs)

    def test_ab_integer_flux_matches_zero_field(self):
        field = FieldSpec(kind="aharonov_bohm", center=(-2.0, MID), flux=1.0)
        geom = StripGeometry(half_width_l=0.5, truncation_L=10.0)
        grid = build_grid(geom, 0.05, ab_point=field.center)
        op_ab = assemble_operator(geom, field, ab_gauge(field), grid)
        op0 = assemble_operator(geom, None, zero_gauge(), grid)
        va = lowest_eigenpairs(op_ab, k=2, tol=1e-8, seed=0).eigenvalues
        v0 = lowest_eigenpairs(op0, k=2, tol=1e-8, seed=0).eigenvalues
        assert np.max(np.abs(va - v0)) < 1e-7

    def test_ab_half_flux_raises_energy(self):
        field = FieldSpec(kind="aharonov_bohm", center=(-1.0, MID), flux=0.5)
        geom = StripGeometry(half_width_l=0.5, truncation_L=10.0)
        grid = build_grid(geom, 0.05, ab_point=field.center)
        op_ab = assemble_operator(geom, field, ab_gauge(field), grid)
        op0 = assemble_operator(geom, None, zero_gauge(), grid)
        va = lowest_eigenpairs(op_ab, k=1, tol=1e-8, seed=0).eigenvalues[0]
        v0 = lowest_eigenpairs(op0, k=1, tol=1e-8, seed=0).eigenvalues[0]
        assert va > v0


class TestFormProperties:
    def _op(self, field=None, gauge=None, l=0.5):
        geom = StripGeometry(half_width_l=l, truncation_L=10.0)
        grid = build_grid(geom, 0.05)
        return assemble_operator(geom, field, gauge, grid)

    def test_zero_field_margins_nonnegative(self):
        op = self._op()
        rep = form_inequality_check(op, None, n_trials=20, seed=1)
        assert rep["min_margin"] >= -1e-6

    def test_magnetic_margins_nonnegative(self):
        field = bump()
        op = self._op(field, line_integral_gauge(field))
        rep = form_inequality_check(op, None, n_trials=20, seed=1)
        assert rep["min_margin"] >= -1e-6

    def test_diamagnetic_on_eigenvectors(self):
        field = bump()
        op = self._op(field, line_integral_gauge(field))
        res = lowest_eigenpairs(op, k=2, tol=1e-8, seed=0, keep_vectors=True)
        for i in range(2):
            assert diamagnetic_defect(op, res.eigenvectors[:, i]) <= 1e-12


def test_result_serialization():
    res = solve_configuration(0.5, 10.0, 0.1, k=2, seed=0)
    d = res.to_dict()
    assert set(d) >= {"eigenvalues", "residuals", "threshold", "below_threshold",
                      "gauge", "seed"}
    res.to_json()
