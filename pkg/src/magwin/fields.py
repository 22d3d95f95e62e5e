"""Magnetic field specifications and flux profiles.

Three field kinds are supported:

* ``compact_bump`` -- radially symmetric C^1 polynomial bump
  B(x) = B0 * (1 - |x-c|^2/s^2)^2 on |x-c| <= s, zero outside;
* ``uniform_disk`` -- B(x) = B0 on |x-c| <= s, zero outside;
* ``aharonov_bohm`` -- a point flux 2*pi*Phi at c (B = 0 away from c).

The flux of a field through the ball B(q, r) is
Phi_q(r) = (1/2pi) * integral of B over B(q, r), and
mu(r) = dist(Phi_q(r), Z) is the quantity entering the Hardy constants.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import HEIGHT, GeometryError

FIELD_KINDS = ("compact_bump", "uniform_disk", "aharonov_bohm")

#: flux below this level counts as identically zero
FLUX_ZERO_THRESHOLD = 1e-12


class FieldError(ValueError):
    """Invalid field specification or evaluation point."""


@dataclass(frozen=True)
class FieldSpec:
    """Declarative description of a magnetic field inside the strip."""

    kind: str
    center: tuple[float, float]
    amplitude: float = 0.0
    support_radius: float = 0.0
    flux: float = 0.0

    def __post_init__(self):
        if self.kind not in FIELD_KINDS:
            raise FieldError(f"unknown field kind {self.kind!r}")
        c1, c2 = self.center
        if not 0.0 < c2 < HEIGHT:
            raise FieldError(f"field center x2={c2} must lie inside (0, pi)")
        if self.kind in ("compact_bump", "uniform_disk"):
            if self.support_radius <= 0.0:
                raise FieldError("compact field needs a positive support radius")
            if self.support_radius >= min(c2, HEIGHT - c2):
                raise FieldError("field support must lie strictly inside the strip")

    @property
    def total_flux(self) -> float:
        """Flux (1/2pi) * integral B over the whole plane."""
        s = self.support_radius
        if self.kind == "compact_bump":
            return self.amplitude * s**2 / 6.0
        if self.kind == "uniform_disk":
            return self.amplitude * s**2 / 2.0
        return self.flux

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "p": [self.center[0], self.center[1]],
            "amplitude": self.amplitude,
            "support_radius": self.support_radius,
            "flux": self.flux,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "FieldSpec":
        return cls(
            kind=d["kind"],
            center=(d["p"][0], d["p"][1]),
            amplitude=d.get("amplitude", 0.0),
            support_radius=d.get("support_radius", 0.0),
            flux=d.get("flux", 0.0),
        )


def bump_amplitude_for_flux(total_flux: float, support_radius: float) -> float:
    """Amplitude B0 such that a compact_bump of radius s carries the given flux."""
    return 6.0 * total_flux / support_radius**2


def evaluate_field(spec: FieldSpec, x) -> np.ndarray | float:
    """Pointwise field value B(x); broadcasts over array arguments.

    For the Aharonov-Bohm kind the field vanishes away from the flux point;
    evaluation at the singular point itself is rejected.
    """
    x1 = np.asarray(x[0], dtype=float)
    x2 = np.asarray(x[1], dtype=float)
    if np.any(x2 <= 0.0) or np.any(x2 >= HEIGHT):
        raise FieldError("evaluation point outside the strip")
    c1, c2 = spec.center
    d2 = (x1 - c1) ** 2 + (x2 - c2) ** 2
    if spec.kind == "aharonov_bohm":
        if np.any(d2 == 0.0):
            raise FieldError("Aharonov-Bohm field is singular at the flux point")
        out = np.zeros_like(d2)
    elif spec.kind == "uniform_disk":
        out = np.where(d2 <= spec.support_radius**2, spec.amplitude, 0.0)
    else:
        t = 1.0 - d2 / spec.support_radius**2
        out = spec.amplitude * np.where(t > 0.0, t, 0.0) ** 2
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class FluxProfile:
    """Sampled r -> Phi_p(r) on a uniform radius grid [0, R]."""

    center: tuple[float, float]
    radii: np.ndarray
    values: np.ndarray
    tol: float = 1e-8

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["r", "flux"])
            for r, v in zip(self.radii, self.values):
                w.writerow([repr(float(r)), repr(float(v))])


@dataclass(frozen=True)
class MuProfile:
    """mu(r) = dist(Phi_p(r), Z) with the maximizer of mu(r)/r.

    ``r_star`` is the smallest radius maximizing mu(r)/r over the grid and
    ``mu0 = r_star / mu(r_star)``; both are undefined when mu vanishes
    identically (``defined`` is False).
    """

    center: tuple[float, float]
    radii: np.ndarray
    values: np.ndarray
    r_star: float = math.nan
    mu0: float = math.nan
    defined: bool = False

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["r", "mu"])
            for r, v in zip(self.radii, self.values):
                w.writerow([repr(float(r)), repr(float(v))])


def _flux_values(spec: FieldSpec, p, radii: np.ndarray, subdiv: int, n_theta: int):
    """Cumulative flux at the given radii by midpoint quadrature in polar coords."""
    R = radii[-1]
    n_fine = (len(radii) - 1) * subdiv
    dr = R / n_fine
    r_mid = (np.arange(n_fine) + 0.5) * dr
    dth = 2.0 * math.pi / n_theta
    th = (np.arange(n_theta) + 0.5) * dth
    # accumulate the angular sum in chunks to keep peak memory bounded
    chunk = max(1, (1 << 22) // n_fine)
    b_sum = np.zeros(n_fine)
    for lo in range(0, n_theta, chunk):
        t = th[lo:lo + chunk]
        x1 = p[0] + np.outer(r_mid, np.cos(t))
        x2 = p[1] + np.outer(r_mid, np.sin(t))
        b_sum += evaluate_field(spec, (x1, x2)).sum(axis=1)
    ring = b_sum * dth * r_mid * dr  # integral over each annulus
    cum = np.concatenate([[0.0], np.cumsum(ring)]) / (2.0 * math.pi)
    return cum[::subdiv].copy()


def flux_profile(spec: FieldSpec, p, R: float, n: int = 64, tol: float = 1e-8) -> FluxProfile:
    """Flux profile Phi_p(r) on n+1 equispaced radii in [0, R].

    Quadrature is refined (doubling) until successive values agree to ``tol``
    absolutely at every radius.
    """
    if n < 16:
        raise FieldError("need at least 16 radii")
    if R <= 0.0:
        raise GeometryError("ball radius must be positive")
    if R >= min(p[1], HEIGHT - p[1]):
        raise GeometryError("ball B(p, R) must lie inside the strip")
    radii = np.linspace(0.0, R, n + 1)

    if spec.kind == "aharonov_bohm":
        # point flux: Phi_p(r) jumps by spec.flux once the ball covers the point
        d = math.hypot(p[0] - spec.center[0], p[1] - spec.center[1])
        vals = np.where(radii >= d, spec.flux, 0.0)
        return FluxProfile(center=tuple(p), radii=radii, values=vals, tol=tol)

    subdiv, n_theta = 4, 64
    vals = _flux_values(spec, p, radii, subdiv, n_theta)
    for _ in range(12):
        subdiv *= 2
        n_theta *= 2
        fine = _flux_values(spec, p, radii, subdiv, n_theta)
        err = np.max(np.abs(fine - vals))
        vals = fine
        if err < tol:
            break
    else:
        raise FieldError(f"flux quadrature did not reach tol={tol} (last err {err:.3g})")
    return FluxProfile(center=tuple(p), radii=radii, values=vals, tol=tol)


def mu_from_flux(values: np.ndarray) -> np.ndarray:
    """Distance of each flux value to the nearest integer."""
    return np.abs(values - np.round(values))


def mu_profile(fp: FluxProfile) -> MuProfile:
    """mu(r) profile together with the maximizer of mu(r)/r.

    Ties in the argmax resolve to the smallest radius.  A parabolic fit
    through the three grid points around the argmax refines interior maxima.
    """
    mu = mu_from_flux(fp.values)
    r = fp.radii
    if np.max(mu) <= FLUX_ZERO_THRESHOLD:
        return MuProfile(center=fp.center, radii=r, values=mu)

    ratio = np.full_like(mu, -np.inf)
    ratio[1:] = mu[1:] / r[1:]
    best = ratio.max()
    i = int(np.argmax(ratio >= best - 1e-15 * max(1.0, best)))
    r_star, mu_star = float(r[i]), float(mu[i])
    if 0 < i < len(r) - 1:
        # quadratic refinement of the grid maximum (kinks excluded by the fit check)
        y0, y1, y2 = ratio[i - 1], ratio[i], ratio[i + 1]
        denom = y0 - 2.0 * y1 + y2
        if denom < 0.0:
            delta = 0.5 * (y0 - y2) / denom
            if abs(delta) < 1.0:
                h = r[1] - r[0]
                r_ref = float(r[i] + delta * h)
                mu_ref = float(np.interp(r_ref, r, mu))
                if r_ref > 0 and mu_ref / r_ref >= mu_star / r_star:
                    r_star, mu_star = r_ref, mu_ref
    return MuProfile(
        center=fp.center,
        radii=r,
        values=mu,
        r_star=r_star,
        mu0=r_star / mu_star,
        defined=True,
    )


def flux_nontrivial(mp: MuProfile) -> bool:
    """Flux condition for the absence certificate: mu(r) is not identically 0."""
    return bool(np.max(mp.values) > FLUX_ZERO_THRESHOLD)
