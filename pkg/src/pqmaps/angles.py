"""Angle functions, discrete Gauss-Bonnet and (delta, b)-map bounds.

Angles are exact rationals measured in units of pi: the coefficient ``c``
stands for the angle ``c * pi``.  Curvatures are reported in the same unit.
For a face ``k(F) = sum of its angles - (d - 2)``; for a vertex
``k(o) = (2 - mu(o)) - sum of the angles at o``.  Whenever a bound mixes pi
with rationals it is decided with the enclosure ``333/106 < pi < 355/113``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import PreconditionError, TheoremViolation
from .planar_map import PlanarMap, ball, distances, multi_source_distances

__all__ = [
    "PI_LOW",
    "PI_HIGH",
    "AngleFunction",
    "AngleCurvatureReport",
    "DeltaBParams",
    "assign_regular",
    "angle_curvatures",
    "lemma_A_check",
    "delta_b_params",
    "dense_bound_check",
    "DenseBoundReport",
    "ball_bound_check",
    "compare_with_pi",
    "random_angles",
]

PI_LOW = Fraction(333, 106)
PI_HIGH = Fraction(355, 113)


def compare_with_pi(lhs: Fraction, a: Fraction, b: Fraction) -> bool | None:
    """Decide ``lhs <= a + b * pi`` for ``b >= 0``; ``None`` when the enclosure cannot."""
    if lhs <= a + b * PI_LOW:
        return True
    if lhs > a + b * PI_HIGH:
        return False
    return None


class AngleFunction(dict):
    """Corner dart -> angle coefficient (multiple of pi)."""

    @classmethod
    def checked(cls, m: PlanarMap, angles: Mapping[int, Fraction]) -> "AngleFunction":
        corners = set(m.corner_darts())
        keys = set(angles)
        if keys != corners:
            missing = sorted(corners - keys)[:5]
            extra = sorted(keys - corners)[:5]
            raise PreconditionError(f"angle function must cover exactly the corners; missing {missing} extra {extra}")
        out = cls({d: Fraction(v) for d, v in angles.items()})
        if any(v < 0 for v in out.values()):
            raise PreconditionError("angles must be non-negative")
        return out


def assign_regular(m: PlanarMap) -> AngleFunction:
    """Every corner of a d-gon gets ``(d - 2)/d``, making all faces flat."""
    out = AngleFunction()
    for f, walk in enumerate(m.faces):
        d = len(walk)
        for x in walk:
            out[x] = Fraction(d - 2, d)
    return out


def random_angles(m: PlanarMap, seed: int, *, nonpositive: bool = False,
                  denominator: int = 12) -> AngleFunction:
    """Seeded angle function with rational coefficients.

    By default every corner gets an arbitrary value in ``[0, 2]``.  With
    ``nonpositive=True`` the result starts from :func:`assign_regular` and
    only shrinks angles: at a boundary vertex freely, at an interior vertex
    by at most the vertex's negative curvature.  Faces then stay at
    curvature ``<= 0`` and interior vertices do too, but only when they
    already were under the regular assignment.
    """
    rng = random.Random(seed)
    corners = m.corner_darts()
    if not nonpositive:
        return AngleFunction({d: Fraction(rng.randint(0, 2 * denominator), denominator) for d in corners})
    a = assign_regular(m)
    at: dict[int, list[int]] = {}
    for d in corners:
        at.setdefault(m.origin(d), []).append(d)
    mu = m.multiplicity
    ext = m.exterior_vertices
    for v, ds in at.items():
        if v in ext:
            for d in ds:
                a[d] = a[d] * rng.randint(0, denominator) / denominator
            continue
        slack = sum(a[d] for d in ds) - (2 - mu[v])
        if slack <= 0:
            continue
        take = slack * rng.randint(0, denominator) / denominator
        d = rng.choice(ds)
        cut = min(take, a[d])
        a[d] -= cut
    return a


@dataclass(frozen=True)
class AngleCurvatureReport:
    face_curvatures: tuple[Fraction, ...]
    vertex_curvatures: tuple[Fraction, ...]
    I_f: Fraction
    I_v: Fraction
    I_v_interior: Fraction
    I_v_boundary: Fraction

    def as_dict(self) -> dict:
        return {
            "unit": "pi",
            "faces": list(self.face_curvatures),
            "vertices": list(self.vertex_curvatures),
            "I_f": self.I_f,
            "I_v": self.I_v,
            "I_v_interior": self.I_v_interior,
            "I_v_boundary": self.I_v_boundary,
        }


def angle_curvatures(m: PlanarMap, a: Mapping[int, Fraction]) -> AngleCurvatureReport:
    """Exact curvatures; ``I_f + I_v = 2`` (i.e. 2 pi) is enforced."""
    if m.edge_count == 0:
        raise PreconditionError("map has no edges")
    a = AngleFunction.checked(m, a)
    faces = tuple(sum((a[x] for x in walk), Fraction(0)) - (len(walk) - 2) for walk in m.faces)
    at_vertex = [Fraction(0)] * m.vertex_count
    for x, c in a.items():
        at_vertex[m.origin(x)] += c
    mu = m.multiplicity
    verts = tuple((2 - mu[v]) - at_vertex[v] for v in range(m.vertex_count))
    ext = m.exterior_vertices
    I_f = sum(faces, Fraction(0))
    I_vi = sum((k for v, k in enumerate(verts) if v not in ext), Fraction(0))
    I_vb = sum((k for v, k in enumerate(verts) if v in ext), Fraction(0))
    if I_f + I_vi + I_vb != 2:
        raise TheoremViolation(f"Gauss-Bonnet fails: I_f + I_v = {I_f + I_vi + I_vb} pi")
    return AngleCurvatureReport(faces, verts, I_f, I_vi + I_vb, I_vi, I_vb)


def lemma_A_check(m: PlanarMap, a: Mapping[int, Fraction]) -> Fraction:
    """Slack ``n + I_f + I_v^i - 2`` (units of pi) of the perimeter inequality.

    Needs a positive perimeter and non-positive curvature on every face and
    interior vertex.
    """
    if m.perimeter < 1:
        raise PreconditionError("perimeter must be positive")
    rep = angle_curvatures(m, a)
    if any(k > 0 for k in rep.face_curvatures):
        raise PreconditionError("some face has positive curvature")
    ext = m.exterior_vertices
    if any(k > 0 for v, k in enumerate(rep.vertex_curvatures) if v not in ext):
        raise PreconditionError("some interior vertex has positive curvature")
    slack = m.perimeter + rep.I_f + rep.I_v_interior - 2
    if slack < 0:
        raise TheoremViolation(f"perimeter inequality fails with slack {slack} pi")
    return slack


@dataclass(frozen=True)
class DeltaBParams:
    """``delta`` in units of pi, or ``None`` when the map is flat."""

    delta: Fraction | None
    b: int

    @property
    def flat(self) -> bool:
        return self.delta is None

    def as_dict(self) -> dict:
        return {"delta": "flat" if self.delta is None else self.delta, "delta_unit": "pi", "b": self.b}


def _non_flat(m: PlanarMap, rep: AngleCurvatureReport):
    ext = m.exterior_vertices
    faces = [f for f, k in enumerate(rep.face_curvatures) if k != 0]
    verts = [v for v, k in enumerate(rep.vertex_curvatures) if v not in ext and k != 0]
    return faces, verts


def delta_b_params(m: PlanarMap, a: Mapping[int, Fraction]) -> DeltaBParams:
    """Largest ``delta`` and smallest ``b`` for which ``(m, a)`` is a (delta, b)-map."""
    rep = angle_curvatures(m, a)
    faces, verts = _non_flat(m, rep)
    for f in faces:
        if rep.face_curvatures[f] > 0:
            raise PreconditionError(f"face {f} has positive curvature {rep.face_curvatures[f]} pi")
    for v in verts:
        if rep.vertex_curvatures[v] > 0:
            raise PreconditionError(f"vertex {v} has positive curvature {rep.vertex_curvatures[v]} pi")
    b = max([m.vertex_degree(v) for v in range(m.vertex_count)]
            + [m.face_degree(f) for f in range(m.face_count)])
    ks = [-rep.face_curvatures[f] for f in faces] + [-rep.vertex_curvatures[v] for v in verts]
    return DeltaBParams(min(ks) if ks else None, b)


@dataclass(frozen=True)
class DenseBoundReport:
    area: int
    perimeter: int
    r: int
    params: DeltaBParams
    defect_vertices: int
    intermediate_bound: Fraction
    intermediate_holds: bool
    vertex_bound: tuple[Fraction, Fraction]
    vertex_holds: bool | None
    area_bound: tuple[Fraction, Fraction]
    area_holds: bool | None

    @property
    def holds(self) -> bool:
        return bool(self.intermediate_holds and self.vertex_holds and self.area_holds)

    def as_dict(self) -> dict:
        return {
            "area": self.area,
            "perimeter": self.perimeter,
            "r": self.r,
            **self.params.as_dict(),
            "defect_vertices": self.defect_vertices,
            "defect_vertices_intermediate_bound": self.intermediate_bound,
            "defect_vertices_intermediate_holds": self.intermediate_holds,
            "defect_vertices_bound": {"rational": self.vertex_bound[0], "pi_coefficient": self.vertex_bound[1]},
            "defect_vertices_holds": self.vertex_holds,
            "area_bound": {"rational": self.area_bound[0], "pi_coefficient": self.area_bound[1]},
            "area_holds": self.area_holds,
            "holds": self.holds,
        }


def dense_bound_check(m: PlanarMap, a: Mapping[int, Fraction], r: int | None = None) -> DenseBoundReport:
    """Area bound ``pi b (1 + b/delta)(b^r + 1) n`` and the defect-vertex count.

    ``r`` is the largest distance from a vertex to the nearest boundary
    vertex, non-flat vertex or vertex of a non-flat face.  It is always
    computed; a smaller supplied value is rejected.  For a flat map the
    ``1/delta`` terms are dropped.
    """
    rep = angle_curvatures(m, a)
    params = delta_b_params(m, a)
    faces, verts = _non_flat(m, rep)
    defect = set(m.exterior_vertices) | set(verts)
    for f in faces:
        defect.update(m.face_vertices(f))
    computed = max(multi_source_distances(m, defect))
    if r is None:
        r = computed
    elif r < computed:
        raise PreconditionError(f"supplied r = {r} is below the actual value {computed}")
    n, b = m.perimeter, params.b
    reach = Fraction(b ** r + 1)
    if params.flat:
        inter = Fraction(n)
        vb = (Fraction(0), Fraction(n))  # n * pi
        ab = (Fraction(0), b * reach * n)
    else:
        dl = params.delta
        inter = n + (-rep.I_v_interior) / dl + b * (-rep.I_f) / dl
        vb = (b * n / dl, Fraction(n))
        # pi b (1 + b/(delta pi)) = pi b + b^2/delta
        ab = (b * b / dl * reach * n, b * reach * n)
    nv = len(defect)
    inter_ok = nv <= inter
    v_ok = compare_with_pi(Fraction(nv), *vb)
    a_ok = compare_with_pi(Fraction(m.area), *ab)
    return DenseBoundReport(m.area, n, r, params, nv, inter, inter_ok, vb, v_ok, ab, a_ok)


def ball_bound_check(m: PlanarMap, radius_limit: int | None = None) -> list[tuple[int, int, int, int]]:
    """Violations of ``|B(d, o)| <= b^d + 1`` with ``b`` the largest vertex degree.

    Returns ``(o, d, size, bound)`` for every failing ball; an empty list
    means the bound holds for every centre and radius checked.
    """
    b = max(m.vertex_degree(v) for v in range(m.vertex_count))
    bad = []
    for o in range(m.vertex_count):
        dist = distances(m, o)
        top = max(dist) if radius_limit is None else min(max(dist), radius_limit)
        counts = [0] * (max(dist) + 1)
        for x in dist:
            counts[x] += 1
        size = 0
        for d in range(top + 1):
            size += counts[d]
            if size > b ** d + 1:
                bad.append((o, d, size, b ** d + 1))
    return bad
