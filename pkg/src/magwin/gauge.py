"""Vector potentials for declared fields and gauge transformations.

Gauges produced here expose two contracts used by the 2-D discretization:
a vectorized pointwise potential ``A(x1, x2) -> (a1, a2)`` and vectorized
edge integrals ``int_edge A . dl`` along straight grid edges (the Peierls
phases).  The Aharonov-Bohm gauge integrates exactly through subtended
angles, so the plaquette containing the flux point carries circulation
2*pi*Phi and every other plaquette carries zero.

``compactify_gauge`` implements the tail gauge transformation
A~ = A - grad(h), h = zeta(x1) * h_tail(x), which leaves the field
unchanged and makes the potential vanish for |x1| > 2b.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .fields import FieldSpec, evaluate_field
from .geometry import HEIGHT


class GaugeError(ValueError):
    """Unsupported field kind or violated gauge precondition."""


# 4-point Gauss-Legendre nodes/weights on [0, 1]
_GL_NODES = 0.5 * (1.0 + np.array([-0.8611363115940526, -0.3399810435848563,
                                   0.3399810435848563, 0.8611363115940526]))
_GL_WEIGHTS = 0.5 * np.array([0.3478548451374538, 0.6521451548625461,
                              0.6521451548625461, 0.3478548451374538])


def ab_potential(flux: float, p, x) -> tuple[np.ndarray, np.ndarray]:
    """Aharonov-Bohm potential at x for a point flux 2*pi*flux at p.

    a1 = -flux (x2-p2)/r^2, a2 = flux (x1-p1)/r^2; |A| = |flux| / dist(x, p).
    """
    x1 = np.asarray(x[0], dtype=float)
    x2 = np.asarray(x[1], dtype=float)
    d2 = (x1 - p[0]) ** 2 + (x2 - p[1]) ** 2
    if np.any(d2 == 0.0):
        raise GaugeError("Aharonov-Bohm potential is singular at the flux point")
    return -flux * (x2 - p[1]) / d2, flux * (x1 - p[0]) / d2


class GaugeSpec:
    """A concrete vector potential with pointwise and edge-integral evaluation."""

    def __init__(self, kind: str, field: FieldSpec | None,
                 potential: Callable, params: dict | None = None,
                 exact_edge_integrals: Callable | None = None):
        self.kind = kind
        self.field = field
        self.potential = potential
        self.params = dict(params or {})
        self._exact_edge_integrals = exact_edge_integrals

    def __call__(self, x1, x2):
        return self.potential(np.asarray(x1, dtype=float), np.asarray(x2, dtype=float))

    def edge_integrals(self, starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
        """int A . dl along straight segments, vectorized over rows of starts/ends."""
        starts = np.asarray(starts, dtype=float)
        ends = np.asarray(ends, dtype=float)
        if self._exact_edge_integrals is not None:
            return self._exact_edge_integrals(starts, ends)
        d = ends - starts
        out = np.zeros(len(starts))
        for t, w in zip(_GL_NODES, _GL_WEIGHTS):
            x1 = starts[:, 0] + t * d[:, 0]
            x2 = starts[:, 1] + t * d[:, 1]
            a1, a2 = self.potential(x1, x2)
            out += w * (a1 * d[:, 0] + a2 * d[:, 1])
        return out

    def shifted(self, h: Callable, grad_h: Callable) -> "GaugeSpec":
        """Gauge-shift A + grad(h); edge integrals pick up exact differences of h."""
        base = self

        def pot(x1, x2):
            a1, a2 = base.potential(x1, x2)
            g1, g2 = grad_h(x1, x2)
            return a1 + g1, a2 + g2

        def edges(starts, ends):
            return (base.edge_integrals(starts, ends)
                    + h(ends[:, 0], ends[:, 1]) - h(starts[:, 0], starts[:, 1]))

        return GaugeSpec(kind=f"shifted({base.kind})", field=base.field,
                         potential=pot, params=dict(base.params),
                         exact_edge_integrals=edges)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "params": self.params}
        if self.field is not None:
            d["field"] = self.field.to_dict()
        return d


def zero_gauge() -> GaugeSpec:
    def pot(x1, x2):
        z = np.zeros_like(np.asarray(x1, dtype=float))
        return z, np.zeros_like(z)
    return GaugeSpec(kind="zero", field=None, potential=pot,
                     exact_edge_integrals=lambda s, e: np.zeros(len(s)))


def ab_gauge(field: FieldSpec) -> GaugeSpec:
    """Aharonov-Bohm gauge with exact edge integrals via subtended angles."""
    if field.kind != "aharonov_bohm":
        raise GaugeError("ab_gauge requires an aharonov_bohm field")
    flux, p = field.flux, field.center

    def pot(x1, x2):
        return ab_potential(flux, p, (x1, x2))

    def edges(starts, ends):
        # A = flux * grad(angle around p); a straight segment avoiding p
        # subtends an angle in (-pi, pi), so the wrapped difference is exact.
        a0 = np.arctan2(starts[:, 1] - p[1], starts[:, 0] - p[0])
        a1 = np.arctan2(ends[:, 1] - p[1], ends[:, 0] - p[0])
        d = a1 - a0
        d = np.mod(d + math.pi, 2.0 * math.pi) - math.pi
        return flux * d

    return GaugeSpec(kind="aharonov_bohm", field=field, potential=pot,
                     params={"flux": flux, "p": list(p)},
                     exact_edge_integrals=edges)


def _chord_integral(field: FieldSpec, x1, x2):
    """a2(x) = int_{-inf}^{x1} B(s, x2) ds, in closed form for the compact kinds."""
    c1, c2 = field.center
    s = field.support_radius
    b0 = field.amplitude
    rho2 = (np.asarray(x2, dtype=float) - c2) ** 2
    t = np.asarray(x1, dtype=float) - c1
    if field.kind == "uniform_disk":
        w2 = s**2 - rho2
        w = np.sqrt(np.clip(w2, 0.0, None))
        return b0 * (np.clip(t, -w, w) + w)
    if field.kind == "compact_bump":
        a = np.clip(1.0 - rho2 / s**2, 0.0, None)
        tmax = s * np.sqrt(a)
        tc = np.clip(t, -tmax, tmax)

        def F(u):
            return b0 * (a**2 * u - 2.0 * a * u**3 / (3.0 * s**2) + u**5 / (5.0 * s**4))

        return F(tc) - F(-tmax)
    raise GaugeError(f"no chord integral for field kind {field.kind!r}")


def line_integral_gauge(field: FieldSpec) -> GaugeSpec:
    """Landau-style gauge A = (0, a2), a2(x) = int_{-inf}^{x1} B(s, x2) ds."""
    if field.kind not in ("uniform_disk", "compact_bump"):
        raise GaugeError("line_integral_gauge requires a compact field")

    def pot(x1, x2):
        z = np.zeros_like(np.asarray(x1, dtype=float))
        return z, _chord_integral(field, x1, x2)

    return GaugeSpec(kind="line_integral", field=field, potential=pot)


def _smoothstep(u):
    """C^1 cubic smoothstep: 0 for u <= 0, 1 for u >= 1."""
    u = np.clip(u, 0.0, 1.0)
    return u * u * (3.0 - 2.0 * u)


def _smoothstep_deriv(u):
    inside = (u > 0.0) & (u < 1.0)
    u = np.clip(u, 0.0, 1.0)
    return np.where(inside, 6.0 * u * (1.0 - u), 0.0)


def compactify_gauge(gauge: GaugeSpec, b: float, n_spline: int = 32769) -> GaugeSpec:
    """Kill the right-tail potential: A~ = A - grad(zeta(x1) h_+(x)).

    Requires the line-integral gauge of a compact field whose support lies in
    |x1| <= b.  In the tail x1 > b the potential is (0, T(x2)) with T the full
    chord integral; h_+ = int_{pi/2}^{x2} T, anchored at (2b, pi/2), is
    path-independent there.  The result vanishes identically for |x1| > 2b
    and generates the same field.
    """
    if gauge.kind != "line_integral" or gauge.field is None:
        raise GaugeError("compactify_gauge expects a line_integral gauge")
    field = gauge.field
    c1, s = field.center[0], field.support_radius
    if abs(c1) + s > b:
        raise GaugeError(f"field support |x1| <= {abs(c1) + s:.3g} exceeds cutoff b={b}")

    ys = np.linspace(0.0, HEIGHT, n_spline)
    T = _chord_integral(field, np.full_like(ys, 2.0 * b), ys)
    T_spline = CubicSpline(ys, T)
    P_spline = T_spline.antiderivative()
    P0 = float(P_spline(HEIGHT / 2.0))

    def P(x2):
        return P_spline(x2) - P0

    def pot(x1, x2):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        a1, a2 = gauge.potential(x1, x2)
        u = (x1 - b) / b
        zeta = _smoothstep(u)
        dzeta = _smoothstep_deriv(u) / b
        return a1 - dzeta * P(x2), a2 - zeta * T_spline(x2)

    return GaugeSpec(kind="compactified", field=field, potential=pot,
                     params={"b": b, "anchor": [2.0 * b, HEIGHT / 2.0]})


def gauge_for_field(field: FieldSpec, kind: str = "auto", b: float | None = None) -> GaugeSpec:
    """Convenience constructor used by the CLI."""
    if field.kind == "aharonov_bohm":
        return ab_gauge(field)
    if kind in ("auto", "line_integral"):
        return line_integral_gauge(field)
    if kind == "compactified":
        if b is None:
            b = abs(field.center[0]) + field.support_radius
        return compactify_gauge(line_integral_gauge(field), b)
    if kind == "zero":
        return zero_gauge()
    raise GaugeError(f"unknown gauge kind {kind!r}")


def sup_A2(gauge: GaugeSpec, x_range, y_range=(0.0, HEIGHT), n: int = 400,
           exclude_center=None, exclude_radius: float = 0.0) -> float:
    """max |A|^2 over a dense sample of the region, refined around the argmax.

    For the Aharonov-Bohm gauge a ball around the flux point must be excluded
    (the potential is unbounded there).
    """
    if gauge.kind == "aharonov_bohm" and exclude_center is None:
        raise GaugeError("sup_A2 of an Aharonov-Bohm gauge needs an excluded ball")

    def scan(x_lo, x_hi, y_lo, y_hi, m):
        xs = np.linspace(x_lo, x_hi, m)
        ys = np.linspace(max(y_lo, 1e-9), min(y_hi, HEIGHT - 1e-9), m)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        if exclude_center is not None:
            mask = (X - exclude_center[0]) ** 2 + (Y - exclude_center[1]) ** 2 >= exclude_radius**2
        else:
            mask = np.ones_like(X, dtype=bool)
        a1, a2 = gauge(X, Y)
        mag = np.where(mask, a1**2 + a2**2, -np.inf)
        k = np.unravel_index(np.argmax(mag), mag.shape)
        return float(mag[k]), float(X[k]), float(Y[k]), xs[1] - xs[0], ys[1] - ys[0]

    best, bx, by, dx, dy = scan(x_range[0], x_range[1], y_range[0], y_range[1], n)
    for _ in range(2):
        val, bx, by, dx, dy = scan(bx - 2 * dx, bx + 2 * dx, by - 2 * dy, by + 2 * dy, 64)
        best = max(best, val)
    return best


def minimize_sup_A2(field: FieldSpec, x_range, b_candidates=None,
                    n: int = 200) -> tuple[GaugeSpec, float]:
    """Coarse search for the gauge with smallest sup |A|^2 in a declared family.

    The family holds the baseline line-integral gauge and its compactified
    variants over a grid of cutoff radii; the returned value is therefore an
    upper bound on the true gauge infimum.
    """
    if field.kind not in ("uniform_disk", "compact_bump"):
        raise GaugeError("minimize_sup_A2 requires a compact field")
    base = line_integral_gauge(field)
    support = abs(field.center[0]) + field.support_radius
    if b_candidates is None:
        b_candidates = support * np.array([1.0, 1.5, 2.0, 3.0, 5.0])
    best_gauge, best_val = base, sup_A2(base, x_range, n=n)
    for b in b_candidates:
        g = compactify_gauge(base, float(b))
        v = sup_A2(g, x_range, n=n)
        if v < best_val:
            best_gauge, best_val = g, v
    return best_gauge, best_val
