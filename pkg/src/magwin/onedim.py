"""Reduced one-dimensional operator -d^2/dx^2 + rho + 2(g - 1).

The Hardy weight rho decays like 1/x^2 away from the ball centers and the
window term 2(g - 1) equals -3/2 on [-l, l] and 0 outside.  Non-negativity
of this operator on the line implies absence of discrete spectrum for the
full two-dimensional problem; a negative eigenvalue of the Dirichlet
truncation is a certificate that the reduced inequality fails.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

WINDOW_DEPTH = 1.5  # 2(1 - g) on the window, g = 1/4 there


class SolverError(RuntimeError):
    """Eigensolver failed to converge; carries residual diagnostics."""


@dataclass(frozen=True)
class RhoProfile:
    """Hardy weight rho(x1) of the reduced operator.

    Compact variant: c_-/(1 + (x1 - p1m)^2) left of p1m, 0 on (p1m, p1p),
    c_+/(1 + (x1 - p1p)^2) right of p1p.  Aharonov-Bohm variant: the left
    branch only (c_plus = 0, p1p = +inf).
    """

    variant: str
    c_minus: float
    c_plus: float
    p1_minus: float
    p1_plus: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        left = x < self.p1_minus
        out[left] = self.c_minus / (1.0 + (x[left] - self.p1_minus) ** 2)
        if self.variant == "compact":
            right = x > self.p1_plus
            out[right] = self.c_plus / (1.0 + (x[right] - self.p1_plus) ** 2)
        return out if out.ndim else float(out)


def build_rho(variant: str, c_minus: float, p1_minus: float,
              c_plus: float = 0.0, p1_plus: float = math.inf) -> RhoProfile:
    """Construct the piecewise Hardy weight; constants must be non-negative."""
    if c_minus < 0.0 or c_plus < 0.0:
        raise ValueError("Hardy constants must be non-negative")
    if variant == "compact":
        if not p1_minus < p1_plus:
            raise ValueError("need p1_minus < p1_plus")
    elif variant == "aharonov_bohm":
        if not math.isfinite(p1_minus):
            raise ValueError("need a finite p1 for the Aharonov-Bohm variant")
        c_plus, p1_plus = 0.0, math.inf
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return RhoProfile(variant=variant, c_minus=c_minus, c_plus=c_plus,
                      p1_minus=p1_minus, p1_plus=p1_plus)


@dataclass(frozen=True)
class Operator1D:
    """3-point finite-difference operator on [-L1, L1] with Dirichlet ends."""

    grid: np.ndarray          # interior nodes
    potential: np.ndarray     # rho + 2(g-1) sampled at the nodes
    h: float
    L1: float
    window_l: float

    def matrix(self) -> sp.csr_matrix:
        n = len(self.grid)
        inv_h2 = 1.0 / self.h**2
        main = 2.0 * inv_h2 + self.potential
        off = -inv_h2 * np.ones(n - 1)
        return sp.diags([off, main, off], [-1, 0, 1], format="csr")


def assemble_operator_1d(rho: RhoProfile | None, l: float, L1: float, h: float) -> Operator1D:
    """Sample rho - (3/2) * [|x| <= l] on a uniform Dirichlet grid.

    The window indicator is sampled by its cell average, so a node sitting
    exactly on +-l carries half the depth; this keeps the discretization
    second-order accurate in h.  Default resolution should satisfy
    h <= l/20 when l > 0.
    """
    n = max(4, int(round(2.0 * L1 / h)))
    h_eff = 2.0 * L1 / n
    x = -L1 + h_eff * np.arange(1, n)
    v = rho(x) if rho is not None else np.zeros_like(x)
    frac = np.clip((l + 0.5 * h_eff - np.abs(x)) / h_eff, 0.0, 1.0)
    v = v - WINDOW_DEPTH * frac
    return Operator1D(grid=x, potential=v, h=h_eff, L1=L1, window_l=l)


def default_grid(l: float, p1_values=(1.0,), L1: float = 40.0) -> tuple[float, float]:
    """Default (h, L1): h = min(l, 1)/40, L1 covering window, weight tails and decay."""
    h = min(l, 1.0) / 40.0 if l > 0.0 else 0.025
    L1 = max(L1, 10.0 * max([abs(p) for p in p1_values] + [l, 1.0]))
    return h, L1


def lowest_eigenpair_1d(op: Operator1D, tol: float = 1e-10) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue and eigenvector of the truncated operator.

    Shift-invert at sigma = -2 (the potential is bounded below by -3/2, so
    the shifted matrix is definite).  A negative eigenvalue is an upper-bound
    certificate that the whole-line quadratic form fails to be non-negative.
    """
    H = op.matrix()
    n = H.shape[0]
    rng = np.random.default_rng(12345)
    v0 = rng.standard_normal(n)
    try:
        vals, vecs = spla.eigsh(H, k=1, sigma=-2.0, which="LM", v0=v0,
                                tol=tol, maxiter=5000)
    except spla.ArpackNoConvergence as exc:
        raise SolverError(f"1-D eigensolver did not converge: {exc}") from exc
    lam = float(vals[0])
    vec = vecs[:, 0]
    res = float(np.linalg.norm(H @ vec - lam * vec) / np.linalg.norm(vec))
    if res > max(1e-8, 100.0 * tol) * max(1.0, abs(lam)):
        raise SolverError(f"1-D eigenpair residual {res:.3g} exceeds tolerance")
    return lam, vec


def lowest_eigenvalue_1d(op: Operator1D, tol: float = 1e-10) -> float:
    return lowest_eigenpair_1d(op, tol)[0]


@dataclass(frozen=True)
class WindowInequalityReport:
    """Minimum of the reduced quadratic form and the minimizing profile."""

    min_eigenvalue: float
    h: float
    L1: float
    window_l: float
    certified_sign: str  # "nonnegative_within_h2" | "negative"
    minimizer: np.ndarray
    grid: np.ndarray

    def to_dict(self, minimizer_csv_path: str | None = None) -> dict:
        return {
            "min_eigenvalue": self.min_eigenvalue,
            "h": self.h,
            "L1": self.L1,
            "window_l": self.window_l,
            "certified_sign": self.certified_sign,
            "minimizer_csv_path": minimizer_csv_path,
        }

    def to_json(self, minimizer_csv_path: str | None = None, **kw) -> str:
        return json.dumps(self.to_dict(minimizer_csv_path), **kw)

    def minimizer_to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "v"])
            for x, v in zip(self.grid, self.minimizer):
                w.writerow([repr(float(x)), repr(float(v))])


def verify_window_inequality(rho: RhoProfile | None, l: float,
                             L1: float, h: float, tol: float = 1e-10) -> WindowInequalityReport:
    """Minimize int |v'|^2 + rho |v|^2 - (3/2) int_{-l}^{l} |v|^2 over the grid.

    The minimum equals the lowest eigenvalue of the assembled operator; a
    value >= -10 h^2 means the window inequality holds within discretization
    error, a clearly negative value certifies its failure (bound state).
    """
    op = assemble_operator_1d(rho, l, L1, h)
    lam, vec = lowest_eigenpair_1d(op, tol)
    sign = "nonnegative_within_h2" if lam >= -10.0 * op.h**2 else "negative"
    nrm = np.linalg.norm(vec) * math.sqrt(op.h)
    return WindowInequalityReport(
        min_eigenvalue=lam, h=op.h, L1=L1, window_l=l,
        certified_sign=sign, minimizer=vec / nrm, grid=op.grid,
    )
