"""Figure rendering for reports: profiles, eigenmodes, sweep phase diagrams.

All functions write a PNG next to the delimited output of the corresponding
command and return the path.  The Agg backend keeps the package headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .fields import FluxProfile, MuProfile
from .onedim import WindowInequalityReport
from .spectral2d import DiscreteMagneticOperator


def plot_flux_profiles(profiles: dict[str, tuple[FluxProfile, MuProfile]],
                       path) -> str:
    """Flux and mu profiles per ball, one row of two panels."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.4))
    for label, (fp, mp) in profiles.items():
        ax1.plot(fp.radii, fp.values, label=label)
        ax2.plot(mp.radii, mp.values, label=label)
    ax1.set_xlabel("r")
    ax1.set_ylabel("flux(r)")
    ax2.set_xlabel("r")
    ax2.set_ylabel("dist(flux(r), Z)")
    ax2.axhline(0.5, color="gray", lw=0.6, ls=":")
    for ax in (ax1, ax2):
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def plot_minimizer(report: WindowInequalityReport, rho, path) -> str:
    """Minimizing profile of the reduced operator over the potential."""
    fig, ax = plt.subplots(figsize=(7.0, 3.4))
    x = report.grid
    ax.plot(x, report.minimizer, label="minimizer")
    pot = (rho(x) if rho is not None else np.zeros_like(x))
    pot = pot - 1.5 * (np.abs(x) <= report.window_l)
    ax2 = ax.twinx()
    ax2.plot(x, pot, color="tab:red", lw=0.8, label="potential")
    ax2.set_ylabel("potential", color="tab:red")
    ax.set_xlabel("x1")
    ax.set_ylabel("v")
    ax.set_title(f"min eigenvalue {report.min_eigenvalue:.3e} ({report.certified_sign})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def plot_eigenvector(op: DiscreteMagneticOperator, vec: np.ndarray,
                     eigenvalue: float, path, x_halfwidth: float | None = None) -> str:
    """Heatmap of |u| on the grid; Dirichlet nodes are blank."""
    grid = op.grid
    img = np.full((grid.ny, grid.nx + 1), np.nan)
    idx = op.index
    for i in range(grid.nx + 1):
        sel = idx[i] >= 0
        img[np.nonzero(sel)[0], i] = np.abs(vec[idx[i][sel]])
    fig, ax = plt.subplots(figsize=(9.0, 2.8))
    extent = (grid.x0, grid.L, 0.0, float(np.max(op.node_y)) + grid.hy)
    im = ax.imshow(img, origin="lower", extent=extent, aspect="auto",
                   cmap="viridis")
    ax.plot([-grid.l, grid.l], [0.0, 0.0], color="red", lw=2.0)
    if x_halfwidth is not None:
        ax.set_xlim(-x_halfwidth, x_halfwidth)
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.set_title(f"|u|, eigenvalue {eigenvalue:.6f}")
    fig.colorbar(im, ax=ax, shrink=0.85)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def plot_sweep(rows: list[dict], x_key: str, y_key: str, path) -> str:
    """Phase diagram of probe verdicts with the certified region overlaid."""
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    colors = {"PRESENT": "tab:blue", "NOT_FOUND": "tab:orange", "ERROR": "tab:red"}
    seen = set()
    for row in rows:
        v = row.get("verdict", "ERROR")
        label = v if v not in seen else None
        seen.add(v)
        ax.scatter(row[x_key], row[y_key], color=colors.get(v, "k"),
                   s=24, label=label)
    crit = [(r[x_key], r[y_key]) for r in rows
            if r.get("critical_length") is not None
            and r.get("window_l") is not None
            and r["window_l"] <= r["critical_length"]]
    if crit:
        ax.scatter(*zip(*crit), facecolors="none", edgecolors="green", s=80,
                   label="certified empty")
    ax.set_xlabel(x_key)
    ax.set_ylabel(y_key)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)
