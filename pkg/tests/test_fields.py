import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from magwin.fields import (
    FieldError,
    FieldSpec,
    bump_amplitude_for_flux,
    evaluate_field,
    flux_nontrivial,
    flux_profile,
    mu_from_flux,
    mu_profile,
)
from magwin.geometry import HEIGHT, GeometryError

MID = HEIGHT / 2.0


def bump(flux=0.3, s=0.5, center=(-3.0, MID)):
    return FieldSpec(kind="compact_bump", center=center,
                     amplitude=bump_amplitude_for_flux(flux, s), support_radius=s)


class TestFieldSpec:
    def test_roundtrip(self):
        f = bump()
        assert FieldSpec.from_dict(f.to_dict()) == f

    def test_center_outside_strip_rejected(self):
        with pytest.raises(FieldError):
            FieldSpec(kind="compact_bump", center=(0.0, HEIGHT + 0.1),
                      amplitude=1.0, support_radius=0.5)

    def test_support_must_fit_in_strip(self):
        with pytest.raises(FieldError):
            FieldSpec(kind="uniform_disk", center=(0.0, 0.3),
                      amplitude=1.0, support_radius=0.5)

    def test_unknown_kind(self):
        with pytest.raises(FieldError):
            FieldSpec(kind="solenoid", center=(0.0, MID))

    def test_total_flux_bump(self):
        f = bump(flux=0.4, s=0.7)
        assert f.total_flux == pytest.approx(0.4, rel=1e-14)

    def test_total_flux_disk(self):
        f = FieldSpec(kind="uniform_disk", center=(0.0, MID),
                      amplitude=2.0, support_radius=0.5)
        assert f.total_flux == pytest.approx(2.0 * 0.25 / 2.0, rel=1e-14)


class TestEvaluateField:
    def test_bump_peak_and_support(self):
        f = bump()
        assert evaluate_field(f, f.center) == pytest.approx(f.amplitude)
        assert evaluate_field(f, (f.center[0] + f.support_radius, f.center[1])) == 0.0
        assert evaluate_field(f, (10.0, 1.0)) == 0.0

    def test_ab_singularity_rejected(self):
        f = FieldSpec(kind="aharonov_bohm", center=(-2.0, MID), flux=0.5)
        with pytest.raises(FieldError):
            evaluate_field(f, f.center)

    def test_outside_strip_rejected(self):
        with pytest.raises(FieldError):
            evaluate_field(bump(), (0.0, -0.1))


class TestFluxProfile:
    def test_total_flux_recovered(self):
        # once the ball covers the support, the profile equals the total flux
        f = bump(flux=0.3, s=0.5)
        fp = flux_profile(f, f.center, 1.0)
        assert fp.values[-1] == pytest.approx(0.3, abs=1e-7)
        assert fp.values[0] == 0.0

    def test_disk_profile_matches_closed_form(self):
        f = FieldSpec(kind="uniform_disk", center=(-2.0, MID),
                      amplitude=1.5, support_radius=0.6)
        fp = flux_profile(f, f.center, 0.5)
        expected = 1.5 * fp.radii**2 / 2.0
        assert np.max(np.abs(fp.values - expected)) < 1e-7

    def test_bump_profile_matches_radial_quadrature(self):
        f = bump(flux=0.3, s=0.5)
        fp = flux_profile(f, f.center, 0.8, n=16)
        for r, v in zip(fp.radii[1:], fp.values[1:]):
            ref, _ = quad(lambda s: s * evaluate_field(f, (f.center[0] + s, f.center[1])),
                          0.0, min(r, f.support_radius))
            assert v == pytest.approx(ref, abs=1e-7)

    def test_profile_monotone_for_signed_field(self):
        fp = flux_profile(bump(), (-3.0, MID), 1.0)
        assert np.all(np.diff(fp.values) >= -1e-12)

    def test_off_center_ball_sees_partial_flux(self):
        # ball covers only the slice x1 in [-2.8, -2.5] of the support
        f = bump(flux=0.3, s=0.5)
        fp = flux_profile(f, (-2.3, MID), 0.5)
        assert 0.0 < fp.values[-1] < 0.3

    def test_ball_must_fit_in_strip(self):
        with pytest.raises(GeometryError):
            flux_profile(bump(), (-3.0, MID), HEIGHT)

    def test_ab_profile_is_step(self):
        f = FieldSpec(kind="aharonov_bohm", center=(-2.0, MID), flux=0.3)
        fp = flux_profile(f, (-2.5, MID), 1.0)
        assert set(np.unique(fp.values)) == {0.0, 0.3}
        jump = fp.radii[np.argmax(fp.values > 0.0)]
        assert jump == pytest.approx(0.5, abs=fp.radii[1] - fp.radii[0])


class TestMu:
    @given(st.lists(st.floats(-10.0, 10.0), min_size=1, max_size=50))
    def test_mu_range(self, values):
        mu = mu_from_flux(np.array(values))
        assert np.all(mu >= 0.0) and np.all(mu <= 0.5 + 1e-15)

    @given(st.floats(-3.0, 3.0), st.integers(-5, 5))
    def test_mu_integer_shift_invariant(self, v, k):
        a = mu_from_flux(np.array([v]))[0]
        b = mu_from_flux(np.array([v + k]))[0]
        assert a == pytest.approx(b, abs=1e-9)

    def test_mu_profile_maximizer(self):
        fp = flux_profile(bump(flux=0.3, s=0.5), (-3.0, MID), 1.0, n=128)
        mp = mu_profile(fp)
        assert mp.defined
        ratios = mp.values[1:] / mp.radii[1:]
        assert mp.values[np.argmin(np.abs(mp.radii - mp.r_star))] / mp.r_star \
            >= np.max(ratios) - 1e-9
        assert mp.mu0 > 0.0

    def test_trivial_profile_flagged(self):
        f = FieldSpec(kind="compact_bump", center=(-3.0, MID),
                      amplitude=0.0, support_radius=0.5)
        mp = mu_profile(flux_profile(f, (-3.0, MID), 1.0))
        assert not mp.defined
        assert not flux_nontrivial(mp)

    def test_integer_total_flux_still_nontrivial(self):
        # the profile passes through non-integer values even if it ends at 1
        f = bump(flux=1.0, s=0.5)
        mp = mu_profile(flux_profile(f, f.center, 1.0))
        assert flux_nontrivial(mp)
        assert mp.values[-1] == pytest.approx(0.0, abs=1e-7)
