"""Numerical verification of eigenfunction mass distribution on hyperbolic collars and cusps.

Submodules:

* ``geometry`` — collar/cusp model domains, metrics, characteristic radii,
  and the pinching limit of the collar metric.
* ``specfun`` — McDonald function via its integral representation, split and
  two-sided envelope bounds, Whittaker radial modes.
* ``cusp_mass`` — mode norms over cusp annuli and their tail ratios.
* ``collar_modes`` — radial mode solver on collars, growth-ratio checks,
  mass-ratio constants, field synthesis, the nonzero-part tail bound.
* ``nodal`` — Euler accounting of zero sets, crossing verdicts, sign scans,
  grid contour extraction.
* ``degeneration`` — pinching sweeps, the thick-mass dichotomy classifier,
  surface-level bound aggregation.
* ``verify`` — named check suites over default grids (also behind the CLI).
"""

from ._backend import backend_name
from .geometry import (
    CollarGeometry,
    CuspGeometry,
    FermiPoint,
    HorocyclePoint,
    boundary_radius,
    collar_coeff_shifted,
    collar_metric_coeff,
    cusp_metric_coeff,
    degenerate_limit_coeff,
    keen_boundary_length,
    keen_halfwidth,
    shifted_fermi,
)
from .specfun import (
    GAMMA0,
    TWO_OVER_GAMMA0,
    BoundConstants,
    QuadratureError,
    SpectralParam,
    k_split,
    k_two_sided_bounds,
    mcdonald_k,
    mcdonald_k_scaled,
    whittaker_mode,
    whittaker_value,
)
from .cusp_mass import (
    Annulus,
    CuspModeCoeffs,
    MassProfile,
    cusp_mass_bound_check,
    cuspidal_tail_ratio,
    khat_sweep,
    lebedev_tail,
    residual_norm_sq,
    residual_tail_ratio_sq,
    whittaker_norm_sq,
)
from .collar_modes import (
    CollarField,
    CollarLemmaReport,
    ModeCoefficients,
    ModeODE,
    ModeSolution,
    fd_residual_phi,
    fd_residual_u,
    mode_mass,
    monotone_ratio_check,
    monotone_ratio_check_solution,
    solve_mode,
    synthesize_field,
    t0_constant,
    t1_constant,
    t2_constant,
    tail_bound_check,
    transform_u,
    verify_collar_lemma,
    wronskian_defect,
)
from .nodal import (
    NodalComponent,
    NodalDecomposition,
    crossing_verdict,
    euler_sum,
    nodal_graph_extract,
    sign_scan,
)
from .degeneration import (
    DichotomyReport,
    PinchFamily,
    RegionBound,
    aggregate_mass_bounds,
    classify_dichotomy,
    metric_convergence_sweep,
    potential_convergence_sweep,
)

__version__ = "0.1.0"
