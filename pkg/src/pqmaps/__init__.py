"""Exact (p,q)-curvature, map surgery and area bounds for planar maps."""

from .errors import (
    InvalidMapError,
    MapFormatError,
    PQMapError,
    PreconditionError,
    SurgeryError,
    TheoremViolation,
)
from .planar_map import (
    MapBuilder,
    PlanarMap,
    ball,
    degrees_and_boundary,
    distances,
    parse,
    parse_with_angles,
    radius,
    serialize,
    validate,
    weak_dual,
)
from .curvature import PQParams, classify_flat, is_pq_map, pq_curvatures

__version__ = "0.1.0"
