"""Volume of unit vector fields on the punctured sphere.

Thin wrapper around the compiled ``_core`` extension.
"""

from ._core import (
    AngleField,
    ChainViolation,
    DegenerateMetric,
    InvalidArgument,
    LineSearchStalled,
    NotConverged,
    PoincareHopfViolation,
    SpherevolError,
    SurfaceMesh,
    UnwrapAmbiguous,
    audit_chain,
    closed_form_volume,
    complete_elliptic_e,
    connection_pullback_integral,
    ellipse_length,
    ellipse_length_agm,
    graph_surface_mesh,
    immersion_rank_check,
    lower_bound,
    mean_curvature,
    optimize,
    poincare_indices,
    ruled_decomposition_check,
    sup_mean_curvature,
    verify_bound,
    volume,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.3.0"
