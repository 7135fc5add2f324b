"""polymatch - Búsqueda de polígonos por similitud y afinidad con invariantes complejos."""

from .exceptions import PolymatchError
from .geometry import (
    apply_affine,
    compose_affine,
    invert_affine,
    is_collinear,
    orientation,
    solve_affine,
    solve_similarity,
)
from .index import (
    PolygonIndex,
    build_index,
    multi_signature_filter,
    query_known_affine,
    query_pair,
    query_similarity,
)
from .invariants import (
    affine_ratio,
    chordal_distance,
    phi_nj,
    phi_perm,
    pseudo_hyperbolic_distance,
    signature,
    signature_distance,
)
from .matcher import affine_fits, verify_affine, verify_known_affine, verify_similarity
from .models import (
    INFINITY,
    AffineMap,
    CandidateSet,
    Ellipse,
    MatchResult,
    NoiseRegion,
    Orientation,
    Polydisc,
    Polygon,
    Signature,
    SignatureChart,
    SimilarityMap,
)
from .noise import (
    equilateral_bound,
    phi_noise_disk,
    tau,
    tau_region,
    triangle_noise_coefficients,
    vertex_ellipses,
)

__version__ = "0.1.0"

__all__ = [
    "INFINITY",
    "AffineMap",
    "CandidateSet",
    "Ellipse",
    "MatchResult",
    "NoiseRegion",
    "Orientation",
    "Polydisc",
    "Polygon",
    "PolygonIndex",
    "PolymatchError",
    "Signature",
    "SignatureChart",
    "SimilarityMap",
    "affine_fits",
    "affine_ratio",
    "apply_affine",
    "build_index",
    "chordal_distance",
    "compose_affine",
    "equilateral_bound",
    "invert_affine",
    "is_collinear",
    "multi_signature_filter",
    "orientation",
    "phi_nj",
    "phi_noise_disk",
    "phi_perm",
    "pseudo_hyperbolic_distance",
    "query_known_affine",
    "query_pair",
    "query_similarity",
    "signature",
    "signature_distance",
    "solve_affine",
    "solve_similarity",
    "tau",
    "tau_region",
    "triangle_noise_coefficients",
    "verify_affine",
    "verify_known_affine",
    "verify_similarity",
    "vertex_ellipses",
]
