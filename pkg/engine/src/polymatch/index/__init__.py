"""Indexación de colecciones de polígonos para consultas sublineales."""

from .hashing import SignatureHashTable
from .kdtree import DiskConstraint, GridIndex, KDTree, build_planar_index
from .polygon_index import (
    FORMAT_VERSION,
    PolygonIndex,
    build_index,
    multi_signature_filter,
    pseudo_hyperbolic_circle,
    query_known_affine,
    query_pair,
    query_similarity,
)

__all__ = [
    "FORMAT_VERSION",
    "PolygonIndex",
    "SignatureHashTable",
    "KDTree",
    "GridIndex",
    "DiskConstraint",
    "build_index",
    "build_planar_index",
    "multi_signature_filter",
    "pseudo_hyperbolic_circle",
    "query_known_affine",
    "query_pair",
    "query_similarity",
]
