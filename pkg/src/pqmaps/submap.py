"""Submaps, the interior decomposition, grown balls and shell submaps."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from .curvature import PQParams, classify_flat, condition_D, is_pq_map, pq_curvatures
from .errors import PreconditionError, SurgeryError, TheoremViolation
from .planar_map import PlanarMap, distances, multi_source_distances, radius

__all__ = [
    "Submap",
    "InteriorDecomposition",
    "extract_submap",
    "interior",
    "contraction_check",
    "ContractionResult",
    "defect_distance",
    "grown_balls",
    "flat_ball_radius",
    "theorem_radius",
    "ball_frontier_darts",
    "shell_submap",
    "face_distances",
]


class Submap:
    """The subcomplex spanned by a set of bounded faces of ``parent``.

    ``boundary_walks`` are the face orbits of the restricted rotation system
    that do not belong to a selected face; each is written as the parent
    darts walked around the complement, so a simple submap has exactly one.
    """

    def __init__(self, parent: PlanarMap, faces: Iterable[int]):
        self.parent = parent
        self.faces = frozenset(faces)
        if not self.faces:
            raise PreconditionError("empty face selection")
        if any(not 0 <= f < parent.face_count for f in self.faces):
            raise PreconditionError("face index out of range")
        darts = set()
        for f in self.faces:
            for d in parent.faces[f]:
                darts.add(d)
                darts.add(d ^ 1)
        self.darts = frozenset(darts)
        self.edges = frozenset(d >> 1 for d in darts)
        self.vertices = frozenset(parent.origin(d) for d in darts)

    @cached_property
    def _restricted(self) -> dict[int, list[int]]:
        return {v: [d for d in self.parent.rotations[v] if d in self.darts] for v in sorted(self.vertices)}

    def _sigma(self, d: int) -> int:
        rot = self._restricted[self.parent.origin(d)]
        return rot[(rot.index(d) + 1) % len(rot)]

    @cached_property
    def boundary_walks(self) -> tuple[tuple[int, ...], ...]:
        selected = {d for f in self.faces for d in self.parent.faces[f]}
        seen = set(selected)
        walks = []
        for d in sorted(self.darts):
            if d in seen:
                continue
            walk = []
            x = d
            while x not in seen:
                seen.add(x)
                walk.append(x)
                x = self._sigma(x ^ 1)
            walks.append(tuple(walk))
        return tuple(walks)

    @cached_property
    def connected(self) -> bool:
        start = next(iter(self.faces))
        seen = {start}
        queue = deque([start])
        pm = self.parent
        # faces are linked when they share a vertex; the subcomplex is
        # connected exactly when this face graph is
        by_vertex: dict[int, list[int]] = {}
        for f in self.faces:
            for v in pm.face_vertices(f):
                by_vertex.setdefault(v, []).append(f)
        while queue:
            f = queue.popleft()
            for v in pm.face_vertices(f):
                for g in by_vertex[v]:
                    if g not in seen:
                        seen.add(g)
                        queue.append(g)
        return len(seen) == len(self.faces)

    @property
    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)

    @cached_property
    def simple(self) -> bool:
        if not self.connected or len(self.boundary_walks) != 1:
            return False
        walk = self.boundary_walks[0]
        origins = [self.parent.origin(d) for d in walk]
        return len(set(origins)) == len(origins) and self.euler_characteristic == 1

    @property
    def perimeter(self) -> int:
        return sum(len(w) for w in self.boundary_walks)

    @property
    def area(self) -> int:
        return len(self.faces)

    @cached_property
    def boundary_vertices(self) -> frozenset[int]:
        return frozenset(self.parent.origin(d) for w in self.boundary_walks for d in w)

    def radius(self) -> int:
        """Largest distance, inside the submap, from a vertex to its boundary."""
        dist = {v: 0 for v in self.boundary_vertices}
        queue = deque(dist)
        while queue:
            v = queue.popleft()
            for d in self._restricted[v]:
                w = self.parent.head(d)
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return max(dist.values())

    def to_map(self) -> tuple[PlanarMap, dict[int, int]]:
        """Standalone map and the parent-to-submap vertex relabelling.

        Only defined for submaps with a single boundary walk (in particular
        simple ones).
        """
        if not self.connected or len(self.boundary_walks) != 1:
            raise PreconditionError("submap is not a disc")
        verts = sorted(self.vertices)
        vmap = {v: i for i, v in enumerate(verts)}
        emap = {e: i for i, e in enumerate(sorted(self.edges))}

        def dd(d: int) -> int:
            return 2 * emap[d >> 1] + (d & 1)

        rotations = [[dd(d) for d in self._restricted[v]] for v in verts]
        return PlanarMap(rotations, dd(self.boundary_walks[0][0])), vmap

    def __repr__(self) -> str:
        return f"Submap(faces={len(self.faces)}, perimeter={self.perimeter}, simple={self.simple})"


def extract_submap(m: PlanarMap, faces: Iterable[int]) -> Submap:
    return Submap(m, faces)


# -- interior -------------------------------------------------------------------------


@dataclass(frozen=True)
class InteriorDecomposition:
    components: tuple[Submap, ...]
    y_length: int

    @property
    def faces(self) -> frozenset[int]:
        out: set[int] = set()
        for c in self.components:
            out |= c.faces
        return frozenset(out)


def _edge_components(m: PlanarMap, faces: Iterable[int]) -> list[list[int]]:
    faces = set(faces)
    seen: set[int] = set()
    comps = []
    for f0 in sorted(faces):
        if f0 in seen:
            continue
        comp = [f0]
        seen.add(f0)
        queue = deque([f0])
        while queue:
            f = queue.popleft()
            for d in m.faces[f]:
                g = m.face_of(d ^ 1)
                if g in faces and g not in seen:
                    seen.add(g)
                    comp.append(g)
                    queue.append(g)
        comps.append(sorted(comp))
    return comps


def interior(m: PlanarMap) -> InteriorDecomposition:
    """Strongly interior faces grouped into their maximal simple pieces.

    Pieces are the edge-connected components; pieces sharing a vertex stay
    separate and that vertex appears on both boundaries.
    """
    ext = m.exterior_vertices
    strong = [f for f in range(m.face_count) if not any(v in ext for v in m.face_vertices(f))]
    comps = tuple(Submap(m, c) for c in _edge_components(m, strong))
    for c in comps:
        if not c.simple:
            raise TheoremViolation("an interior component is not simple")
    return InteriorDecomposition(comps, sum(c.perimeter for c in comps))


# -- contraction inequality --------------------------------------------------------------


@dataclass(frozen=True)
class ContractionResult:
    x_length: int
    y_length: int
    J: Fraction
    p: Fraction
    slack: Fraction


def contraction_check(m: PlanarMap, pq: PQParams) -> ContractionResult:
    """``|x| - |y| - (J + p)`` for the boundary ``x`` and the interior boundary ``y``.

    Requires a (p,q)-map with at least one face, all face degrees at least p.
    A negative slack raises :class:`TheoremViolation`.
    """
    if m.face_count == 0:
        raise PreconditionError("map has no faces")
    if not is_pq_map(m, pq)[0]:
        raise PreconditionError("not a (p,q)-map")
    if not condition_D(m, pq):
        raise PreconditionError("some face has degree below p")
    cur = pq_curvatures(m, pq)
    y = interior(m).y_length
    slack = m.perimeter - y - (cur.J + pq.p)
    if slack < 0:
        raise TheoremViolation(f"contraction inequality fails with slack {slack}")
    return ContractionResult(m.perimeter, y, cur.J, pq.p, slack)


# -- defects and balls ------------------------------------------------------------------


def defect_distance(m: PlanarMap, pq: PQParams) -> tuple[list[int], int]:
    """Distance of every vertex to the defect set and the maximum of those."""
    dist = multi_source_distances(m, classify_flat(m, pq).defect_set)
    return dist, max(dist)


def face_distances(m: PlanarMap, o: int) -> list[int]:
    """Distance from ``o`` to each face, i.e. to its nearest vertex."""
    dist = distances(m, o)
    return [min(dist[v] for v in m.face_vertices(f)) for f in range(m.face_count)]


def grown_balls(m: PlanarMap, o: int):
    """Yield ``(i, faces, vertices)`` for ``M_0 = {o}`` and
    ``M_{i+1}`` = all faces sharing a vertex with ``M_i``, until growth stops."""
    faces_at = m.vertex_faces
    verts = {o}
    faces: set[int] = set()
    i = 0
    yield 0, frozenset(), frozenset(verts)
    while True:
        new_faces = set(faces)
        for v in verts:
            new_faces |= faces_at[v]
        if new_faces == faces:
            return
        added = new_faces - faces
        faces = new_faces
        verts = verts | {v for f in added for v in m.face_vertices(f)}
        i += 1
        yield i, frozenset(faces), frozenset(verts)


def _ball_is_flat_simple(m: PlanarMap, pq: PQParams, faces: frozenset[int]) -> Submap | None:
    if any(m.face_degree(f) != pq.p for f in faces):
        return None
    sub = Submap(m, faces)
    if not sub.simple:
        return None
    inner = sub.vertices - sub.boundary_vertices
    if any(m.vertex_degree(v) != pq.q or v in m.exterior_vertices for v in inner):
        return None
    return sub


def _vertex_ball_radius(m: PlanarMap, pq: PQParams, o: int, defects: frozenset[int]) -> int:
    best = -1
    for i, faces, verts in grown_balls(m, o):
        if verts & defects:
            break
        if i > 0 and _ball_is_flat_simple(m, pq, faces) is None:
            break
        best = i
    return best


def flat_ball_radius(m: PlanarMap, pq: PQParams, *, per_vertex: bool = False):
    """Largest ``i`` such that some grown ball ``M_i`` is a flat simple submap
    containing no defect vertex; 0 when there is none."""
    defects = classify_flat(m, pq).defect_set
    radii = [_vertex_ball_radius(m, pq, o, defects) for o in range(m.vertex_count)]
    r = max([0] + radii)
    return (r, radii) if per_vertex else r


def theorem_radius(m: PlanarMap, pq: PQParams) -> int:
    """Largest radius (as a map) of a grown ball that is a flat simple submap.

    Unlike :func:`flat_ball_radius` the ball may reach the boundary of ``m``,
    as long as its own faces and interior vertices are flat.  Every such ball
    is a simple flat submap, so this is a lower bound for the largest radius
    of a simple flat submap.
    """
    best = 0
    for o in range(m.vertex_count):
        for i, faces, _verts in grown_balls(m, o):
            if i == 0:
                continue
            sub = _ball_is_flat_simple(m, pq, faces)
            if sub is None:
                break
            best = max(best, sub.radius())
    return best


def ball_frontier_darts(m: PlanarMap, o: int, i: int) -> int:
    """Number of darts leaving the vertex set of ``M_i`` along edges outside it."""
    for j, faces, verts in grown_balls(m, o):
        if j == i:
            edges = {d >> 1 for f in faces for d in m.faces[f]}
            return sum(1 for v in verts for d in m.rotations[v] if (d >> 1) not in edges)
    raise PreconditionError(f"ball growth stops before stage {i}")


# -- shell submaps -------------------------------------------------------------------------


def _fill_holes(m: PlanarMap, faces: set[int]) -> set[int]:
    """Add every face not connected to the outer face through unselected faces."""
    reach: set[int] = set()
    queue = deque()
    for d in m.outer_walk:
        f = m.face_of(d ^ 1)
        if f >= 0 and f not in faces and f not in reach:
            reach.add(f)
            queue.append(f)
    while queue:
        f = queue.popleft()
        for d in m.faces[f]:
            g = m.face_of(d ^ 1)
            if g >= 0 and g not in faces and g not in reach:
                reach.add(g)
                queue.append(g)
    return set(range(m.face_count)) - reach


def shell_submap(m: PlanarMap, o: int, r: int) -> Submap:
    """A simple submap containing every face within distance ``r - 1`` of ``o``.

    The boundary of the result stays at distance ``>= r`` from ``o`` and its
    vertices are within ``r + 2`` of ``o``.  Requires face degrees at most 6
    and the ``r``-neighbourhood of ``o`` to avoid the boundary of ``m``.
    """
    if r < 1:
        raise PreconditionError("r must be at least 1")
    if any(m.face_degree(f) > 6 for f in range(m.face_count)):
        raise PreconditionError("some face has degree above 6")
    dist = distances(m, o)
    if any(dist[v] <= r - 1 for v in m.exterior_vertices):
        raise PreconditionError("the r-ball around o touches the boundary")
    fdist = face_distances(m, o)
    core = {f for f in range(m.face_count) if fdist[f] <= r - 1}
    faces = _fill_holes(m, set(core))
    for _ in range(m.vertex_count + 1):
        sub = Submap(m, faces)
        if sub.simple:
            break
        walk = sub.boundary_walks
        origins = [m.origin(d) for w in walk for d in w]
        pinches = sorted({v for v in origins if origins.count(v) > 1})
        if not pinches:
            raise SurgeryError("could not make the shell simple")
        faces |= {f for f in range(m.face_count) if pinches[0] in m.face_vertices(f)}
        faces = _fill_holes(m, faces)
    else:
        raise SurgeryError("could not make the shell simple")
    # drop boundary faces beyond the core when that shortens the boundary
    improved = True
    while improved:
        improved = False
        for f in sorted(faces - core, reverse=True):
            trial = Submap(m, faces - {f})
            if trial.simple and trial.perimeter < sub.perimeter:
                faces = faces - {f}
                sub = trial
                improved = True
                break
    bd = sub.boundary_vertices
    if min(dist[v] for v in bd) < r:
        raise TheoremViolation("shell boundary comes closer than r")
    if max(dist[v] for v in bd) > r + 2:
        raise TheoremViolation("shell boundary vertex farther than r + 2")
    return sub
