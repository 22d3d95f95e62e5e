import numpy as np
import scipy.special

from magwin.bessel import j0_first_zero, j0_series


def test_series_matches_scipy_on_bracket():
    xs = np.linspace(0.0, 5.0, 101)
    ref = scipy.special.j0(xs)
    vals = np.array([j0_series(float(x)) for x in xs])
    assert np.max(np.abs(vals - ref)) < 1e-13


def test_first_zero_matches_scipy():
    ref = float(scipy.special.jn_zeros(0, 1)[0])
    assert abs(j0_first_zero() - ref) < 1e-12


def test_first_zero_reference_value():
    assert abs(j0_first_zero() - 2.404825557695773) <= 1e-12
