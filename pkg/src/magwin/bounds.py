"""Explicit Hardy constants and critical window lengths.

For a compactly supported field the Hardy weight constant is

    c(p, R) = 1 / (16 + c1(R) * c2(p, R))     if Phi_p not identically 0,
    c(p, R) = 0                               otherwise,

with

    c1(R)  = (64 + 4 R^2) / R^4,
    c2     = (2 R^2 c3 c4 + 4 c4 + 4 R^2) / (c3 * cos^2(|p2 - pi/2| + R)),
    c3(p2) = pi^2 * min(p2^-2, (pi - p2)^-2) - 1,
    c4     = max over [0, R] of |(mu(r)/r)'|.

For the Aharonov-Bohm point flux,

    c(p, Phi) = R^2 mu^2 c3 cos^2(|p2 - pi/2| + R)
                / (8 (2 mu^2 R^2 c3 + (8 mu^2 + 8 + c3)(9 R^2 + 16 pi^2))),

with mu = dist(Phi, Z).  The absence bounds are

    kappa = min(pi * c, pi / (4 ln 2 + pi |p1|)),

critical window half-length (kappa_- + kappa_+)/12 (compact, non-strict)
or kappa/6 (Aharonov-Bohm, strict).

c5 and c6 are reported as diagnostics only; they do not enter c(p, R):

    c6 = 4 max(r*^2 / nu0^2, (2 R^3 - 3 R^2 r* + r*^3) / (6 r*)),
    c5 = max(2 mu0^2 + 4 c4^2 c6 mu0^4, c6).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.integrate import quad

from .bessel import j0_first_zero
from .fields import FieldSpec, FluxProfile, MuProfile, flux_nontrivial, flux_profile, mu_profile
from .geometry import HEIGHT, GeometryError

LN2 = math.log(2.0)


class PreconditionError(ValueError):
    """A certificate precondition (ball placement, point position) is violated."""


def c3_transverse(p2: float) -> float:
    """Transverse constant c3(p2) = pi^2 * min(p2^-2, (pi-p2)^-2) - 1; always >= 3."""
    if not 0.0 < p2 < HEIGHT:
        raise GeometryError(f"p2={p2} must lie in (0, pi)")
    # written as a single squared ratio so that c3(pi/2) = 3 exactly
    return (math.pi / min(p2, HEIGHT - p2)) ** 2 - 1.0


def _check_ball(p, R: float) -> float:
    """Validate B(p, R) inside the strip; return cos^2(|p2 - pi/2| + R)."""
    if R <= 0.0:
        raise GeometryError("ball radius must be positive")
    arg = abs(p[1] - HEIGHT / 2.0) + R
    if arg >= HEIGHT / 2.0:
        raise GeometryError("ball touches the strip boundary (cos^2 argument >= pi/2)")
    return math.cos(arg) ** 2


def mu_slope_max(mp: MuProfile) -> float:
    """Estimate c4 = max |(mu(r)/r)'| from a sampled mu profile.

    Uses one-sided differences between consecutive grid points, which
    dominate central differences at the kinks where the flux crosses a
    half-integer; overestimating only shrinks the Hardy constant.
    """
    r = mp.radii[1:]
    f = mp.values[1:] / r
    one_sided = np.abs(np.diff(f)) / np.diff(r)
    # mu(0) = 0 and mu is smooth at 0, so mu/r extends continuously and the
    # first difference already estimates the derivative near the origin
    return float(one_sided.max(initial=0.0))


@dataclass(frozen=True)
class HardyConstantSet:
    """All constants entering c(p, R) or c(p, Phi), plus diagnostics."""

    variant: str  # "compact" | "aharonov_bohm"
    c: float
    c1: float = math.nan
    c2: float = math.nan
    c3: float = math.nan
    c4: float = math.nan
    c5_diagnostic: float = math.nan
    c6_diagnostic: float = math.nan
    nu0: float = math.nan
    mu: float = math.nan  # AB: dist(flux, Z); compact: max of the profile
    mu0: float = math.nan
    r_star: float = math.nan
    R: float = math.nan

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in (
            "variant", "c", "c1", "c2", "c3", "c4",
            "c5_diagnostic", "c6_diagnostic", "nu0", "mu", "mu0", "r_star", "R",
        )}


def hardy_constant_compact(p, R: float, mp: MuProfile) -> HardyConstantSet:
    """Hardy constant c(p, R) for a compactly supported field.

    ``mp`` must sample mu on [0, R]; use a refined grid (see
    :func:`hardy_constants_for_field`) so that the c4 estimate is tight.
    """
    cos2 = _check_ball(p, R)
    if abs(mp.radii[-1] - R) > 1e-12 * max(1.0, R):
        raise GeometryError("mu profile does not cover [0, R]")
    nu0 = j0_first_zero()
    c3 = c3_transverse(p[1])
    c1 = (64.0 + 4.0 * R**2) / R**4
    if not flux_nontrivial(mp):
        return HardyConstantSet(variant="compact", c=0.0, c1=c1, c3=c3, nu0=nu0,
                                mu=float(np.max(mp.values)), R=R)
    c4 = mu_slope_max(mp)
    c2 = (2.0 * R**2 * c3 * c4 + 4.0 * c4 + 4.0 * R**2) / (c3 * cos2)
    c = 1.0 / (16.0 + c1 * c2)
    r0, mu0 = mp.r_star, mp.mu0
    c6 = 4.0 * max(r0**2 / nu0**2, (2.0 * R**3 - 3.0 * R**2 * r0 + r0**3) / (6.0 * r0))
    c5 = max(2.0 * mu0**2 + 4.0 * c4**2 * c6 * mu0**4, c6)
    return HardyConstantSet(
        variant="compact", c=c, c1=c1, c2=c2, c3=c3, c4=c4,
        c5_diagnostic=c5, c6_diagnostic=c6, nu0=nu0,
        mu=float(np.max(mp.values)), mu0=mu0, r_star=r0, R=R,
    )


def hardy_constants_for_field(spec: FieldSpec, p, R: float,
                              n: int = 64, tol: float = 1e-8) -> HardyConstantSet:
    """Compute the flux/mu profiles (10x refined for c4) and the constant set."""
    fp = flux_profile(spec, p, R, n=10 * n, tol=tol)
    return hardy_constant_compact(p, R, mu_profile(fp))


def hardy_constant_ab(p, R: float, flux: float) -> HardyConstantSet:
    """Hardy constant c(p, Phi) for the Aharonov-Bohm point flux."""
    cos2 = _check_ball(p, R)
    c3 = c3_transverse(p[1])
    mu = abs(flux - round(flux))
    num = R**2 * mu**2 * c3 * cos2
    den = 8.0 * (2.0 * mu**2 * R**2 * c3 + (8.0 * mu**2 + 8.0 + c3) * (9.0 * R**2 + 16.0 * math.pi**2))
    return HardyConstantSet(variant="aharonov_bohm", c=num / den, c3=c3,
                            nu0=j0_first_zero(), mu=mu, R=R)


def best_hardy_constant_ab(p, flux: float, r_max: float, n_scan: int = 64) -> HardyConstantSet:
    """Maximize c(p, Phi) over admissible radii R in (0, r_max) on a grid.

    Any admissible R gives a valid sufficient condition, so the best is sound.
    """
    # cos^2 argument must stay below pi/2: R < pi/2 - |p2 - pi/2|
    r_cap = min(r_max, HEIGHT / 2.0 - abs(p[1] - HEIGHT / 2.0))
    if r_cap <= 0.0:
        raise GeometryError("no admissible ball radius for this point")
    best = None
    for R in np.linspace(r_cap / n_scan, r_cap * (1.0 - 1e-9), n_scan):
        cs = hardy_constant_ab(p, float(R), flux)
        if best is None or cs.c > best.c:
            best = cs
    return best


def kappa(c: float, p1_abs: float) -> tuple[float, str]:
    """kappa = min(pi c, pi / (4 ln 2 + pi |p1|)); returns (value, active branch)."""
    if c < 0.0 or p1_abs < 0.0:
        raise ValueError("kappa arguments must be non-negative")
    a = math.pi * c
    b = math.pi / (4.0 * LN2 + math.pi * p1_abs)
    return (a, "hardy") if a <= b else (b, "geometric")


@dataclass(frozen=True)
class BoundReport:
    """Absence certificate data: kappa values, critical length, verdict."""

    variant: str
    window_l: float
    critical_length: float
    verdict_absence: str  # "certified_empty" | "not_certified"
    kappa_minus: float = math.nan
    kappa_plus: float = math.nan
    kappa: float = math.nan
    branch_minus: str = ""
    branch_plus: str = ""
    branch: str = ""
    strict: bool = False
    flux_condition: bool = False
    constants: dict = dc_field(default_factory=dict)
    presence_check: dict | None = None

    def to_dict(self) -> dict:
        d = {
            "variant": self.variant,
            "window_l": self.window_l,
            "critical_length": self.critical_length,
            "verdict_absence": self.verdict_absence,
            "strict_inequality": self.strict,
            "flux_condition": self.flux_condition,
            "constants": self.constants,
        }
        if self.variant == "compact":
            d["kappa_minus"] = self.kappa_minus
            d["kappa_plus"] = self.kappa_plus
            d["branch_minus"] = self.branch_minus
            d["branch_plus"] = self.branch_plus
        else:
            d["kappa"] = self.kappa
            d["branch"] = self.branch
        if self.presence_check is not None:
            d["presence_check"] = self.presence_check
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def critical_length_compact(l: float,
                            cs_minus: HardyConstantSet, p_minus,
                            nontrivial_minus: bool,
                            cs_plus: HardyConstantSet, p_plus,
                            nontrivial_plus: bool) -> BoundReport:
    """Absence report for a compact field with balls left and right of the window.

    The window is certified empty when l <= (kappa_- + kappa_+)/12 and at
    least one of the two fluxes is not identically zero.
    """
    if not (abs(p_minus[0]) - cs_minus.R > l and p_minus[0] < 0):
        raise PreconditionError("left ball must lie entirely in {x1 < -l}")
    if not (abs(p_plus[0]) - cs_plus.R > l and p_plus[0] > 0):
        raise PreconditionError("right ball must lie entirely in {x1 > l}")
    km, bm = kappa(cs_minus.c, abs(p_minus[0]))
    kp, bp = kappa(cs_plus.c, abs(p_plus[0]))
    crit = (km + kp) / 12.0
    flux_ok = nontrivial_minus or nontrivial_plus
    certified = flux_ok and l <= crit
    return BoundReport(
        variant="compact", window_l=l, critical_length=crit,
        verdict_absence="certified_empty" if certified else "not_certified",
        kappa_minus=km, kappa_plus=kp, branch_minus=bm, branch_plus=bp,
        strict=False, flux_condition=flux_ok,
        constants={"minus": cs_minus.to_dict(), "plus": cs_plus.to_dict()},
    )


def critical_length_ab(l: float, cs: HardyConstantSet, p) -> BoundReport:
    """Absence report for the Aharonov-Bohm flux at p with p1 < -l (strict l < kappa/6)."""
    if not p[0] < -l:
        raise PreconditionError("Aharonov-Bohm point must satisfy p1 < -l")
    k, br = kappa(cs.c, abs(p[0]))
    crit = k / 6.0
    certified = l < crit
    return BoundReport(
        variant="aharonov_bohm", window_l=l, critical_length=crit,
        verdict_absence="certified_empty" if certified else "not_certified",
        kappa=k, branch=br, strict=True, flux_condition=cs.mu > 0.0,
        constants={"ab": cs.to_dict()},
    )


def presence_condition(lambda_l: float, max_A_sq: float) -> bool:
    """Eigenvalue-presence test: lambda(l) + sup |A|^2 < 1 forces discrete spectrum."""
    return lambda_l + max_A_sq < 1.0


def tail_quadrature_identity() -> float:
    """Improper integral of (pi/2 + arctan s)^2 over (-inf, 0); equals pi ln 2.

    Serves as the self-test of the module's improper-integral routine.
    """
    val, _ = quad(lambda s: (math.pi / 2.0 + math.atan(s)) ** 2, -np.inf, 0.0)
    return val
