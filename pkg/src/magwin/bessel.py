"""First positive zero of the Bessel function J0, computed by bisection.

The zero is found on the ascending power series
J0(x) = sum_k (-1)^k (x/2)^{2k} / (k!)^2, which converges rapidly for the
bracketing interval [2, 3].  The value is computed once and cached.
"""

from __future__ import annotations

import functools


def j0_series(x: float) -> float:
    """J0(x) by its ascending power series (adequate for |x| <= 5)."""
    q = 0.25 * x * x
    term = 1.0
    total = 1.0
    k = 0
    while abs(term) > 1e-19:
        k += 1
        term *= -q / (k * k)
        total += term
    return total


@functools.lru_cache(maxsize=1)
def j0_first_zero(tol: float = 1e-13) -> float:
    """Smallest positive root of J0, accurate to ``tol``."""
    lo, hi = 2.0, 3.0
    flo = j0_series(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = j0_series(mid)
        if flo * fm <= 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)
