"""Hyperbolic convexity of level sets of holomorphic self-maps of the unit disk."""

from hypolevel.convexity import (
    ConvexityReport,
    EmptyRegion,
    WholeDisk,
    Witness,
    ZeroGradient,
    boundary_points,
    check_h_convex,
    support_test,
)
from hypolevel.dsl import MapExpr, load_map, parse, unparse
from hypolevel.geodesic import Arc, Diameter, geodesic_through, orthogonal_geodesic, segment_sample
from hypolevel.hyp_core import (
    BoundaryPoint,
    DiskPoint,
    InvalidSelfMap,
    MoebiusAutomorphism,
    hyp_distance,
    nu_f,
    pseudo_hyp_distance,
)
from hypolevel.level_set import (
    DMu,
    OmegaLambda,
    PhiMu,
    extract_region,
    grad_u,
    is_starlike,
    membership,
    potential_u,
    radius_function,
)
from hypolevel.proofs import proof_quantities_dmu, proof_quantities_omega

__version__ = "0.1.0"
