"""Corridors in (4,4)-maps and the surgeries built on them.

A corridor is stored through its gluing darts ``g_0, ..., g_t``.  Dart
``g_i`` lies on the walk of face ``F_{i+1}`` and its twin on the walk of
``F_i``, so walking along the gluing darts crosses the corridor from one
side (``q'``, through the origins) to the other (``q``, through the heads).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import PreconditionError, SurgeryError, TheoremViolation
from .planar_map import MapBuilder, PlanarMap, distances

__all__ = [
    "Corridor",
    "build_corridor",
    "corridor_from_gluing",
    "collapse_corridor",
    "CollapseResult",
    "reduce_face_degree",
    "ReduceResult",
    "distance_preserving_subdivision",
    "sample_pairs",
    "distance_table",
]


@dataclass(frozen=True)
class Corridor:
    gluing: tuple[int, ...]
    faces: tuple[int, ...]
    side_q: tuple[int, ...]
    side_q_prime: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.faces)

    def side_vertices(self, m: PlanarMap, which: str) -> list[int]:
        side = self.side_q if which == "q" else self.side_q_prime
        start = m.head(self.gluing[0]) if which == "q" else m.origin(self.gluing[0])
        return [start] + [m.head(d) for d in side]

    def sides_simple(self, m: PlanarMap) -> bool:
        return all(len(set(vs)) == len(vs) for vs in (self.side_vertices(m, "q"), self.side_vertices(m, "q'")))

    def reversed(self, m: PlanarMap) -> "Corridor":
        return corridor_from_gluing(m, [d ^ 1 for d in reversed(self.gluing)])


def _require_44(m: PlanarMap) -> None:
    from .curvature import PQParams, is_pq_map

    ok, witness = is_pq_map(m, PQParams(4, 4))
    if not ok:
        raise PreconditionError(f"corridors need a (4,4)-map; violation at {witness}")


def _walk_from(m: PlanarMap, d: int) -> list[int]:
    walk = m.faces[m.face_of(d)]
    i = walk.index(d)
    return list(walk[i:] + walk[:i])


def _next_gluing(m: PlanarMap, d: int) -> int:
    """Gluing dart leaving the face entered through ``d`` on the far side."""
    walk = _walk_from(m, d)
    n = len(walk)
    if n < 4:
        raise SurgeryError(f"face of degree {n} has no non-adjacent gluing edge")
    if n % 2 == 0:
        out = walk[n // 2]
    else:
        out = min(walk[n // 2], walk[n // 2 + 1])
    return out ^ 1


def _extend(m: PlanarMap, d: int) -> list[int]:
    out = []
    seen = set()
    x = d
    while m.face_of(x) >= 0:
        f = m.face_of(x)
        if f in seen:
            raise SurgeryError("corridor runs into itself")
        seen.add(f)
        x = _next_gluing(m, x)
        out.append(x)
    return out


def corridor_from_gluing(m: PlanarMap, gluing) -> Corridor:
    """Rebuild a corridor (faces and sides) from its gluing darts."""
    gluing = tuple(gluing)
    faces = []
    side_q: list[int] = []
    side_qp: list[int] = []
    for i in range(1, len(gluing)):
        a, b = gluing[i - 1], gluing[i]
        f = m.face_of(a)
        if f < 0 or m.face_of(b ^ 1) != f:
            raise PreconditionError(f"gluing darts {a}, {b} do not share a face")
        walk = _walk_from(m, a)
        j = walk.index(b ^ 1)
        if j in (1, len(walk) - 1):
            raise PreconditionError("consecutive gluing edges are adjacent")
        faces.append(f)
        side_q.extend(walk[1:j])
        side_qp.extend(d ^ 1 for d in reversed(walk[j + 1:]))
    if len(set(faces)) != len(faces):
        raise SurgeryError("corridor visits a face twice")
    return Corridor(gluing, tuple(faces), tuple(side_q), tuple(side_qp))


def build_corridor(m: PlanarMap, e: int, *, check_44: bool = True) -> Corridor:
    """Maximal corridor through edge ``e``.

    Across a face entered through one gluing edge the next one is the
    antipodal edge (for odd degree, the one with the smaller dart).  The
    corridor is extended both ways until it reaches the boundary.  Side
    simplicity is asserted.
    """
    if check_44:
        _require_44(m)
    if not 0 <= e < m.edge_count:
        raise PreconditionError(f"edge {e} out of range")
    d = 2 * e
    forward = _extend(m, d)
    backward = _extend(m, d ^ 1)
    gluing = [x ^ 1 for x in reversed(backward)] + [d] + forward
    c = corridor_from_gluing(m, gluing)
    if not c.sides_simple(m):
        raise TheoremViolation("a side of the corridor passes a vertex twice")
    return c


# -- collapse ------------------------------------------------------------------------


@dataclass(frozen=True)
class CollapseResult:
    map: PlanarMap
    vertex_map: dict[int, int]


def collapse_corridor(m: PlanarMap, c: Corridor) -> CollapseResult:
    """Excise a corridor of squares and glue its two sides together.

    Every gluing edge is contracted, which turns each square into a digon,
    and one edge of each digon is then removed.  ``vertex_map`` sends old
    vertices to the vertices of the result.
    """
    for f in c.faces:
        if m.face_degree(f) != 4:
            raise PreconditionError("collapse needs every corridor face to have degree 4")
    if m.face_of(c.gluing[0] ^ 1) != -1 or m.face_of(c.gluing[-1]) != -1:
        raise PreconditionError("corridor does not run from boundary to boundary")
    b = MapBuilder.from_map(m)
    alias = {v: v for v in range(m.vertex_count)}

    def find(v: int) -> int:
        while alias[v] != v:
            v = alias[v]
        return v

    for g in c.gluing:
        if b.origin(g) == b.origin(g ^ 1):
            raise SurgeryError("collapsing would create a loop")
        w = b.origin(g ^ 1)
        u = b.contract_edge(g)
        alias[w] = u
    for f in c.faces:
        walk = m.faces[f]
        # the side edge on q' stays, the side edge on q is removed
        j = walk.index(next(x for x in walk if x in c.side_q))
        b.delete_edge(walk[j])
    out, _dmap, vmap = b.freeze()
    return CollapseResult(out, {v: vmap[find(v)] for v in range(m.vertex_count)})


# -- degree reduction -------------------------------------------------------------------


@dataclass(frozen=True)
class ReduceResult:
    map: PlanarMap
    corridor: Corridor
    vertex_map: dict[int, int]


def reduce_face_degree(m: PlanarMap, c: Corridor, t: int) -> ReduceResult:
    """Lower the degree of corridor face ``t`` (1-based) by one.

    Faces after ``t`` must be squares.  Every gluing edge from ``t`` on is
    replaced by the diagonal that leans one step back along a side of face
    ``t`` with at least two edges, shearing the following squares; face
    ``t`` loses one edge and every other face keeps its degree.
    """
    if not 1 <= t <= c.length:
        raise PreconditionError("face index out of range")
    ft = c.faces[t - 1]
    if m.face_degree(ft) < 5:
        raise PreconditionError("face must have degree at least 5")
    if any(m.face_degree(f) != 4 for f in c.faces[t:]):
        raise PreconditionError("faces after the reduced one must be squares")
    if m.face_of(c.gluing[-1]) != -1:
        raise PreconditionError("corridor must end on the boundary")
    T = c.length
    arcs = []
    for s in range(1, T + 1):
        walk = _walk_from(m, c.gluing[s - 1])
        j = walk.index(c.gluing[s] ^ 1)
        arcs.append((walk[1:j], walk[j + 1:]))  # (top arc A_s, bottom arc B_s)
    top_t, bottom_t = arcs[t - 1]
    b = MapBuilder.from_map(m)
    new_gluing = list(c.gluing[:t])
    use_bottom = len(bottom_t) >= 2
    for s in range(t, T + 1):
        e = c.gluing[s]
        if use_bottom:
            corner_low = bottom_t[1] if s == t else arcs[s - 2][1][0]
            corner_high = m.phi(e)
        else:
            corner_low = arcs[s - 1][1][0]
            corner_high = arcs[s - 1][0][-1]
        b.delete_edge(e)
        x = b.insert_edge(corner_low, corner_high)
        new_gluing.append(x)
    out, dmap, vmap = b.freeze()
    corridor = corridor_from_gluing(out, [dmap[d] for d in new_gluing])
    return ReduceResult(out, corridor, dict(vmap))


# -- distance preserving subdivision ------------------------------------------------------


def distance_preserving_subdivision(m: PlanarMap, o: int) -> PlanarMap:
    """Split faces of degree at least 7 until every face has degree at most 6.

    Each diagonal cuts off a square ``o_i o_{i+1} o_{i+2} o_{i+3}`` at the
    first position with ``|dist(o, o_i) - dist(o, o_{i+3})| <= 1``, so
    distances to ``o`` are unchanged and no distance grows.
    """
    dist = distances(m, o)
    b = MapBuilder.from_map(m)
    queue = [m.faces[f][0] for f in range(m.face_count) if m.face_degree(f) >= 7]
    while queue:
        d0 = queue.pop()
        walk = b.face_walk(d0)
        n = len(walk)
        if n < 7:
            continue
        i0 = walk.index(min(walk))
        walk = walk[i0:] + walk[:i0]
        vs = [b.origin(d) for d in walk]
        choice = None
        for i in range(n):
            u, w = vs[i], vs[(i + 3) % n]
            if u != w and abs(dist[u] - dist[w]) <= 1:
                choice = i
                break
        if choice is None:
            raise TheoremViolation("no admissible diagonal in a large face")
        x = b.insert_edge(walk[choice], walk[(choice + 3) % n])
        # x lies on the remaining face of degree n - 2
        queue.append(x)
    out = b.freeze()[0]
    if distances(out, o) != dist:
        raise TheoremViolation("subdivision changed a distance to the marked vertex")
    return out


# -- distance helpers ----------------------------------------------------------------------


def distance_table(m: PlanarMap) -> list[list[int]]:
    return [distances(m, v) for v in range(m.vertex_count)]


def sample_pairs(m: PlanarMap, count: int, seed: int) -> list[tuple[int, int]]:
    rng = random.Random(seed)
    return [(rng.randrange(m.vertex_count), rng.randrange(m.vertex_count)) for _ in range(count)]
