"""Exact (p,q)-curvature of faces and vertices.

For a face ``irr(F) = p - d(F)``; for a vertex
``irr(o) = (p/q)(q - d(o)) - mu(o)`` where ``mu`` counts the passages of the
boundary path through ``o``.  Summed over any map these always give ``p``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError, TheoremViolation
from .planar_map import PlanarMap

__all__ = [
    "PQParams",
    "CurvatureReport",
    "FlatClassification",
    "pq_curvatures",
    "is_pq_map",
    "classify_flat",
    "condition_B",
    "condition_D",
    "is_pq_star",
    "STANDARD_PAIRS",
]

STANDARD_PAIRS = ((3, 6), (4, 4), (6, 3))
_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class PQParams:
    """The pair (p, q) with ``1/p + 1/q = 1/2``, stored exactly.

    The standard pairs are (3,6), (4,4) and (6,3).  With ``relaxed=True`` any
    positive rationals on the curve are accepted; only the curvature
    identity makes sense for those.
    """

    p: Fraction
    q: Fraction
    relaxed: bool = False

    def __init__(self, p, q, relaxed: bool = False):
        p, q = Fraction(p), Fraction(q)
        if p <= 0 or q <= 0:
            raise PreconditionError("p and q must be positive")
        if 1 / p + 1 / q != _HALF:
            raise PreconditionError(f"1/p + 1/q must equal 1/2, got p={p}, q={q}")
        if not relaxed and (p, q) not in STANDARD_PAIRS:
            raise PreconditionError(f"({p},{q}) is not a standard pair; pass relaxed=True")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "relaxed", relaxed)

    @classmethod
    def from_p(cls, p) -> "PQParams":
        """The relaxed pair with the given ``p > 2``."""
        p = Fraction(p)
        return cls(p, 2 * p / (p - 2), relaxed=True)

    @property
    def is_standard(self) -> bool:
        return (self.p, self.q) in STANDARD_PAIRS

    def require_standard(self) -> None:
        if not self.is_standard:
            raise PreconditionError("operation needs (p,q) in {(3,6),(4,4),(6,3)}")

    @property
    def pi(self) -> int:
        return int(self.p)

    @property
    def qi(self) -> int:
        return int(self.q)

    def __str__(self) -> str:
        return f"({self.p},{self.q})"


@dataclass(frozen=True)
class CurvatureReport:
    face_curvatures: tuple[Fraction, ...]
    vertex_curvatures: tuple[Fraction, ...]
    I_f: Fraction
    I_v: Fraction
    I_v_interior: Fraction
    I_v_boundary: Fraction
    J: Fraction

    def as_dict(self) -> dict:
        return {
            "faces": list(self.face_curvatures),
            "vertices": list(self.vertex_curvatures),
            "I_f": self.I_f,
            "I_v": self.I_v,
            "I_v_interior": self.I_v_interior,
            "I_v_boundary": self.I_v_boundary,
            "J": self.J,
        }


def pq_curvatures(m: PlanarMap, pq: PQParams) -> CurvatureReport:
    """Per-element and total curvatures; the identity ``I_v + I_f = p`` is enforced."""
    p, q = pq.p, pq.q
    faces = tuple(p - m.face_degree(f) for f in range(m.face_count))
    mu = m.multiplicity
    verts = tuple((p / q) * (q - m.vertex_degree(v)) - mu[v] for v in range(m.vertex_count))
    ext = m.exterior_vertices
    I_f = sum(faces, Fraction(0))
    I_vi = sum((c for v, c in enumerate(verts) if v not in ext), Fraction(0))
    I_vb = sum((c for v, c in enumerate(verts) if v in ext), Fraction(0))
    I_v = I_vi + I_vb
    if m.edge_count == 0:
        # the lone vertex has no boundary passage; treat it as a degenerate disc
        pass
    elif I_v + I_f != p:
        raise TheoremViolation(f"I_v + I_f = {I_v + I_f} differs from p = {p}")
    return CurvatureReport(faces, verts, I_f, I_v, I_vi, I_vb, -I_f - 2 * I_vi)


def is_pq_map(m: PlanarMap, pq: PQParams) -> tuple[bool, tuple[str, int] | None]:
    """``(True, None)`` or ``(False, ("face"|"vertex", index))``.

    Interior faces (no edge on the boundary) need degree ``>= p``; interior
    vertices need degree ``>= q``.  A vertex of degree 1 is a precondition
    failure rather than a verdict.
    """
    for v in range(m.vertex_count):
        if m.vertex_degree(v) == 1:
            raise PreconditionError(f"vertex {v} has degree 1")
    ext_faces = m.exterior_faces
    for f in range(m.face_count):
        if f not in ext_faces and m.face_degree(f) < pq.p:
            return False, ("face", f)
    ext = m.exterior_vertices
    for v in range(m.vertex_count):
        if v not in ext and m.vertex_degree(v) < pq.q:
            return False, ("vertex", v)
    return True, None


def condition_B(m: PlanarMap, pq: PQParams) -> bool:
    """Every face has degree ``< 2p`` and every vertex degree ``< 2q``."""
    return (all(m.face_degree(f) < 2 * pq.p for f in range(m.face_count))
            and all(m.vertex_degree(v) < 2 * pq.q for v in range(m.vertex_count)))


def condition_D(m: PlanarMap, pq: PQParams) -> bool:
    """Every face, exterior ones included, has degree ``>= p``."""
    return all(m.face_degree(f) >= pq.p for f in range(m.face_count))


def is_pq_star(m: PlanarMap, pq: PQParams) -> bool:
    try:
        ok = is_pq_map(m, pq)[0]
    except PreconditionError:
        return False
    return ok and condition_B(m, pq) and condition_D(m, pq)


@dataclass(frozen=True)
class FlatClassification:
    flat_faces: frozenset[int]
    flat_interior_vertices: frozenset[int]
    non_flat_faces: frozenset[int]
    non_flat_interior_vertices: frozenset[int]
    defect_set: frozenset[int]


def classify_flat(m: PlanarMap, pq: PQParams) -> FlatClassification:
    """Flat faces (degree p), flat interior vertices (degree q) and the defect set.

    The defect set holds the exterior vertices, the non-flat interior
    vertices and every vertex of a non-flat face.
    """
    flat_f = frozenset(f for f in range(m.face_count) if m.face_degree(f) == pq.p)
    nonflat_f = frozenset(range(m.face_count)) - flat_f
    ext = m.exterior_vertices
    interior = [v for v in range(m.vertex_count) if v not in ext]
    flat_v = frozenset(v for v in interior if m.vertex_degree(v) == pq.q)
    nonflat_v = frozenset(interior) - flat_v
    defects = set(ext) | nonflat_v
    for f in nonflat_f:
        defects.update(m.face_vertices(f))
    return FlatClassification(flat_f, flat_v, nonflat_f, nonflat_v, frozenset(defects))
