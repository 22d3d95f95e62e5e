"""Spectral toolkit for a Dirichlet strip with a magnetic Neumann window.

The package studies the Schrodinger operator (-i grad + A)^2 on the strip
R x (0, pi) with Dirichlet boundary conditions everywhere except a bottom
window |x1| < l carrying the magnetic Neumann condition.  It provides

- explicit Hardy constants and critical window lengths below which the
  discrete spectrum is provably empty (``bounds``),
- magnetic fields, flux profiles and gauge potentials, including the
  Aharonov-Bohm point flux and gauge compactification (``fields``,
  ``gauge``),
- a reduced one-dimensional operator whose non-negativity certifies the
  absence mechanism (``onedim``),
- a Peierls finite-volume discretization of the two-dimensional operator
  with eigenvalue probes for the discrete spectrum (``spectral2d``),
- a verification suite and a command-line front end (``verify``, ``cli``).
"""

from .bessel import j0_first_zero
from .bounds import (
    BoundReport,
    HardyConstantSet,
    PreconditionError,
    best_hardy_constant_ab,
    c3_transverse,
    critical_length_ab,
    critical_length_compact,
    hardy_constant_ab,
    hardy_constant_compact,
    hardy_constants_for_field,
    kappa,
    presence_condition,
    tail_quadrature_identity,
)
from .fields import (
    FieldSpec,
    FluxProfile,
    MuProfile,
    bump_amplitude_for_flux,
    evaluate_field,
    flux_nontrivial,
    flux_profile,
    mu_from_flux,
    mu_profile,
)
from .gauge import (
    GaugeError,
    GaugeSpec,
    ab_gauge,
    compactify_gauge,
    gauge_for_field,
    line_integral_gauge,
    minimize_sup_A2,
    sup_A2,
    zero_gauge,
)
from .geometry import HEIGHT, GeometryError, StripGeometry
from .onedim import (
    RhoProfile,
    SolverError,
    WindowInequalityReport,
    build_rho,
    lowest_eigenvalue_1d,
    verify_window_inequality,
)
from .spectral2d import (
    DEFAULT_LADDER,
    DiscreteMagneticOperator,
    Grid2D,
    ProbeResult,
    SpectrumResult,
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

__version__ = "0.1.0"
