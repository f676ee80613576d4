"""Dynamics of fronts and point singularities of degenerate parabolic equations.

Submodules:

- ``polyalg``    homogeneous polynomial algebra in two variables
- ``chain1d``    front chain of the one-dimensional model equation
- ``heatwave2d`` front dynamics of the reduced equation in graph charts
- ``vortex``     point-singularity (vortex-type) dynamics
- ``refsolver``  finite-volume reference solver and front extraction
- ``cli``        scenario runner
"""
from . import chain1d, heatwave2d, polyalg, refsolver, vortex
from .drift import DriftField
from .errors import (
    BoundaryContact,
    CFLViolation,
    ConfigError,
    DegenerateExpansion,
    DegenerateVortex,
    DegreeMismatch,
    GraphLost,
    NoCrossing,
    NonFinite,
    NotDivisible,
    SingDynError,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryContact",
    "CFLViolation",
    "ConfigError",
    "DegenerateExpansion",
    "DegenerateVortex",
    "DegreeMismatch",
    "DriftField",
    "GraphLost",
    "NoCrossing",
    "NonFinite",
    "NotDivisible",
    "SingDynError",
    "chain1d",
    "heatwave2d",
    "polyalg",
    "refsolver",
    "vortex",
]
