"""Dynamics of a point (vortex-type) singularity of the reduced equation."""
from .cascade import CascadeBundle, build_cascade, cascade_matrices, p0_2_coeffs
from .dynamics import (
    VortexRates,
    VortexTrajectory,
    c1_0_dot_closed,
    c1_0_dot_forms,
    identity_residual,
    rates_from_cascade,
    run_vortex,
    vortex_rhs,
)
from .residuals import (
    ResidualSeries,
    consistency_residuals,
    defining_equations,
    defining_residuals,
    exact_derivatives,
)
from .state import Y_NAMES, Z_NAMES, VortexState, rotate_state, rotation

__all__ = [
    "CascadeBundle",
    "ResidualSeries",
    "VortexRates",
    "VortexState",
    "VortexTrajectory",
    "Y_NAMES",
    "Z_NAMES",
    "build_cascade",
    "c1_0_dot_closed",
    "c1_0_dot_forms",
    "cascade_matrices",
    "consistency_residuals",
    "defining_equations",
    "defining_residuals",
    "exact_derivatives",
    "identity_residual",
    "p0_2_coeffs",
    "rates_from_cascade",
    "rotate_state",
    "rotation",
    "run_vortex",
    "vortex_rhs",
]
