"""Deterministic standard maps, seeded random (p,q)-maps and defect injection."""

from __future__ import annotations

import copy
import math
import random
from dataclasses import dataclass
from typing import Hashable, Sequence

from .curvature import PQParams, classify_flat, is_pq_map
from .errors import PreconditionError, SurgeryError
from .planar_map import (
    MapBuilder,
    PlanarMap,
    multi_source_distances,
    single_vertex_map,
    weak_dual,
)

__all__ = [
    "map_from_polygons",
    "gen_standard",
    "gen_random_pq",
    "perturb_defects",
    "PerturbResult",
    "attach_face",
    "polygon_map",
    "coarsen",
]

_SQRT3_2 = math.sqrt(3) / 2


def map_from_polygons(coords: dict[Hashable, tuple[float, float]],
                      polygons: Sequence[Sequence[Hashable]]) -> PlanarMap:
    """Build a map from straight-line polygons that tile a disc.

    Rotations are obtained by sorting neighbours by angle; the outer orbit is
    the one with positive signed area (bounded faces are walked clockwise).
    """
    keys = sorted({k for poly in polygons for k in poly})
    index = {k: i for i, k in enumerate(keys)}
    edges = sorted({tuple(sorted((index[a], index[b])))
                    for poly in polygons for a, b in zip(poly, list(poly[1:]) + [poly[0]])})
    rot: list[list[tuple[float, int]]] = [[] for _ in keys]
    for k, (u, w) in enumerate(edges):
        for d, (a, b) in ((2 * k, (u, w)), (2 * k + 1, (w, u))):
            (xa, ya), (xb, yb) = coords[keys[a]], coords[keys[b]]
            rot[a].append((math.atan2(yb - ya, xb - xa), d))
    rotations = [[d for _, d in sorted(r)] for r in rot]
    probe = PlanarMap(rotations, 0, check=False)
    orbits, _ = probe._orbits
    outer = None
    for orb in orbits:
        area = 0.0
        for d in orb:
            (xa, ya) = coords[keys[probe.origin(d)]]
            (xb, yb) = coords[keys[probe.head(d)]]
            area += xa * yb - xb * ya
        if area > 0:
            if outer is not None:
                raise ValueError("polygons do not tile a disc")
            outer = orb[0]
    if len(orbits) != len(polygons) + 1:
        raise ValueError("polygons do not tile a disc")
    return PlanarMap(rotations, outer)


def _tri_xy(a: int, b: int) -> tuple[float, float]:
    return (a + b / 2, b * _SQRT3_2)


def _triangles_from_growth(n: int) -> list[tuple[tuple[int, int], ...]]:
    """Grow a single lattice triangle ``n`` times by adding every triangle
    sharing a vertex with the current set."""
    def tri_vertices(t):
        a, b, up = t
        if up:
            return ((a, b), (a + 1, b), (a, b + 1))
        return ((a + 1, b), (a + 1, b + 1), (a, b + 1))

    def triangles_at(v):
        a, b = v
        return [(a, b, 1), (a - 1, b, 1), (a, b - 1, 1),
                (a - 1, b, 0), (a, b - 1, 0), (a - 1, b - 1, 0)]

    current = {(0, 0, 1)}
    for _ in range(n):
        verts = {v for t in current for v in tri_vertices(t)}
        current = {t for v in verts for t in triangles_at(v)}
    return [tri_vertices(t) for t in sorted(current)]


def polygon_map(d: int) -> PlanarMap:
    """A single face of degree ``d >= 2`` bounded by a simple cycle."""
    if d < 2:
        raise PreconditionError("a polygon needs at least two sides")
    coords = {i: (math.cos(2 * math.pi * i / d), math.sin(2 * math.pi * i / d)) for i in range(d)}
    if d == 2:
        rotations = [[0, 2], [3, 1]]
        return PlanarMap(rotations, 0)
    return map_from_polygons(coords, [tuple(range(d))])


def gen_standard(p: int, n: int) -> PlanarMap:
    """The standard flat map S^p_n.

    ``p = 4``: the 2n x 2n square grid.  ``p = 3``: the hexagon of side ``n``
    cut into unit triangles.  ``p = 6``: the weak dual of a single triangle
    grown ``n`` times in the triangular lattice.  ``n = 0`` gives the one-vertex
    map.
    """
    if p not in (3, 4, 6):
        raise PreconditionError(f"p must be 3, 4 or 6, got {p}")
    if n < 0:
        raise PreconditionError("n must be non-negative")
    if n == 0:
        return single_vertex_map()
    if p == 4:
        m = 2 * n
        coords = {(i, j): (float(i), float(j)) for i in range(m + 1) for j in range(m + 1)}
        squares = [((i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1))
                   for i in range(m) for j in range(m)]
        return map_from_polygons(coords, squares)
    if p == 3:
        def inside(a, b):
            return max(abs(a), abs(b), abs(a + b)) <= n
        tris = []
        for a in range(-n, n + 1):
            for b in range(-n, n + 1):
                up = ((a, b), (a + 1, b), (a, b + 1))
                down = ((a + 1, b), (a + 1, b + 1), (a, b + 1))
                for t in (up, down):
                    if all(inside(*v) for v in t):
                        tris.append(t)
        coords = {v: _tri_xy(*v) for t in tris for v in t}
        return map_from_polygons(coords, tris)
    tris = _triangles_from_growth(n)
    coords = {v: _tri_xy(*v) for t in tris for v in t}
    return weak_dual(map_from_polygons(coords, tris))


# -- boundary attachment ----------------------------------------------------------


def attach_face(b: MapBuilder, start: int, k: int, degree: int) -> int:
    """Glue a new face of the given degree onto ``k`` consecutive boundary edges.

    ``start`` is a position in the builder's outer walk; the covered stretch is
    ``walk[start : start + k]``.  A new path of ``degree - k`` edges closes the
    face.  Returns the new outer dart.
    """
    walk = b.outer_walk()
    n = len(walk)
    if not 1 <= k < n or degree - k < 1:
        raise SurgeryError("invalid attachment size")
    a = walk[start % n]
    c = walk[(start + k) % n]
    x = b.insert_edge(a, c)
    b.outer = x
    for _ in range(degree - k - 1):
        b.subdivide(x ^ 1)
    return x


def _attachment_ok(b: MapBuilder, walk: list[int], mu: dict[int, int], start: int, k: int,
                   degree: int, pq: PQParams) -> bool:
    n = len(walk)
    if not 1 <= k < n or degree - k < 1:
        return False
    u = b.origin(walk[start % n])
    w = b.origin(walk[(start + k) % n])
    if u == w and degree - k == 1:
        return False
    for i in range(1, k):
        mid = b.origin(walk[(start + i) % n])
        if mu[mid] != 1 or b.degree(mid) < pq.q:
            return False
    for v in {u, w}:
        extra = 2 if u == w else 1
        if b.degree(v) + extra >= 2 * pq.q:
            return False
    return True


def _mu(b: MapBuilder, walk: list[int]) -> dict[int, int]:
    mu = {v: 0 for v in b.rot}
    for d in walk:
        mu[b.origin(d)] += 1
    return mu


def gen_random_pq(pq: PQParams, steps: int, seed: int, *, small_faces: int = 0,
                  start_n: int = 1) -> PlanarMap:
    """A seeded random (p,q)-map satisfying condition (B).

    Starting from the standard map of radius ``start_n`` (a single p-gon
    when ``start_n = 0``) every step glues a
    face of degree in ``[p, 2p-1]`` onto a stretch of the boundary.  Boundary
    vertices swallowed by the new face must already have degree at least
    ``q``, so interior degrees stay legal.  ``small_faces`` extra steps glue
    exterior faces of degree below ``p`` (these break condition (D) only).
    """
    pq.require_standard()
    p, q = pq.pi, pq.qi
    rng = random.Random(seed)
    b = MapBuilder.from_map(gen_standard(p, start_n) if start_n > 0 else polygon_map(p))
    for step in range(steps + small_faces):
        walk = b.outer_walk()
        mu = _mu(b, walk)
        n = len(walk)
        small = step >= steps
        for _attempt in range(60):
            if small:
                degree = rng.randint(max(2, p - 2), p - 1)
            elif rng.random() < 0.8:
                degree = p
            else:
                degree = rng.randint(p + 1, 2 * p - 1)
            k = rng.randint(1, min(degree - 1, n - 1))
            start = rng.randrange(n)
            if not _attachment_ok(b, walk, mu, start, k, degree, pq):
                continue
            if small:
                trial = copy.deepcopy(b)
                attach_face(trial, start, k, degree)
                if not is_pq_map(trial.freeze()[0], pq)[0]:
                    continue
                b = trial
            else:
                attach_face(b, start, k, degree)
            break
    m = b.freeze()[0]
    ok, witness = is_pq_map(m, pq)
    if not ok:
        raise AssertionError(f"generator produced a non-(p,q) map: {witness}")
    return m


# -- defect injection ----------------------------------------------------------------


@dataclass(frozen=True)
class PerturbResult:
    map: PlanarMap
    insertions: int
    defects_before: int
    defects_after: int


def _straight_path(m: PlanarMap, v: int, dist: list[int]) -> list[int]:
    """Darts of a shortest path from ``v`` to the boundary that goes straight
    through each intermediate vertex when possible."""
    path: list[int] = []
    cur = v
    incoming = None
    while dist[cur] > 0:
        rot = m.rotations[cur]
        down = [d for d in rot if dist[m.head(d)] == dist[cur] - 1]
        choice = None
        if incoming is not None:
            i = rot.index(incoming ^ 1)
            opposite = rot[(i + len(rot) // 2) % len(rot)]
            if opposite in down and len(rot) % 2 == 0:
                choice = opposite
        if choice is None:
            choice = min(down)
        path.append(choice)
        incoming = choice
        cur = m.head(choice)
    return path


def _open_slit(b: MapBuilder, path: list[int]) -> list[tuple[int, int]]:
    """Cut along a path whose last vertex is on the boundary, innermost edge last.

    Returns ``(vertex, copy)`` for every split vertex, outermost first.
    """
    splits = []
    for d in reversed(path):
        e = d ^ 1  # leaves the vertex that is currently on the boundary
        a = b.origin(e)
        walk = b.outer_walk()
        corners = [x for x in walk if b.origin(x) == a]
        if not corners:
            raise SurgeryError("slit does not reach the boundary")
        y = b.cut_edge_from_boundary(e, corners[0])
        splits.append((a, b.origin(y)))
    return splits


def _close_sector(b: MapBuilder, pending: list[int], pq: PQParams) -> None:
    """Make the pending slit vertices interior again by gluing p-faces."""
    p, q = pq.pi, pq.qi
    order = {v: i for i, v in enumerate(pending)}
    todo = set(pending)
    guard = 0
    while todo:
        guard += 1
        if guard > 20 * (len(pending) + 5) * q:
            raise SurgeryError("sector closing did not terminate")
        walk = b.outer_walk()
        n = len(walk)
        y = min(todo, key=order.__getitem__)
        pos = [i for i, d in enumerate(walk) if b.origin(d) == y]
        if len(pos) != 1:
            raise SurgeryError("slit vertex visited twice by the boundary")
        j = pos[0]
        prev_v = b.origin(walk[(j - 1) % n])
        next_v = b.origin(walk[(j + 1) % n])
        if b.degree(y) < q:
            # raise the degree of y with a k = 1 attachment toward a finished side
            if next_v not in todo:
                attach_face(b, j, 1, p)
            else:
                attach_face(b, j - 1, 1, p)
            continue
        mu = _mu(b, walk)
        lo, hi = j, j
        # extend only while the face keeps at least one new edge (k <= p - 1)
        while hi - lo + 3 < p and hi - lo + 3 < n:
            nxt = b.origin(walk[(hi + 1) % n])
            if nxt in todo and mu[nxt] == 1 and b.degree(nxt) >= q and nxt != y:
                hi += 1
                continue
            prv = b.origin(walk[(lo - 1) % n])
            if prv in todo and mu[prv] == 1 and b.degree(prv) >= q and prv != y:
                lo -= 1
                continue
            break
        k = hi - lo + 2
        attach_face(b, lo - 1, k, p)
        for i in range(lo, hi + 1):
            todo.discard(b.origin(walk[i % n]))


def perturb_defects(m: PlanarMap, pq: PQParams, defect_count: int, seed: int) -> PerturbResult:
    """Insert ``defect_count`` sectors, each creating a vertex of degree above q.

    Each insertion picks a flat interior vertex ``v``, cuts the map along a
    straight shortest path from ``v`` to the boundary, and closes the slit
    with new flat faces.  ``v`` ends with degree ``q + 1``; slit vertices are
    closed at degree ``q`` whenever the path is straight through them.
    """
    pq.require_standard()
    defects_before = len(classify_flat(m, pq).non_flat_interior_vertices) + \
        len(classify_flat(m, pq).non_flat_faces)
    if defect_count == 0:
        return PerturbResult(m, 0, defects_before, defects_before)
    rng = random.Random(seed)
    cur = m
    for _ in range(defect_count):
        dist = multi_source_distances(cur, cur.exterior_vertices)
        flat = classify_flat(cur, pq)
        candidates = [v for v in range(cur.vertex_count)
                      if dist[v] >= 1 and cur.vertex_degree(v) == pq.q
                      and v not in flat.defect_set]
        if not candidates:
            candidates = [v for v in range(cur.vertex_count)
                          if dist[v] >= 1 and cur.vertex_degree(v) >= pq.q]
        if not candidates:
            raise PreconditionError("insufficient interior for a defect")
        v = rng.choice(candidates)
        path = _straight_path(cur, v, dist)
        b = MapBuilder.from_map(cur)
        splits = _open_slit(b, path)
        # the outermost split stays on the boundary; the others close inside out
        pending = [v] + [x for pair in reversed(splits[1:]) for x in pair]
        _close_sector(b, pending, pq)
        cur = b.freeze()[0]
    ok, witness = is_pq_map(cur, pq)
    if not ok:
        raise AssertionError(f"defect injection broke the (p,q) property: {witness}")
    flat = classify_flat(cur, pq)
    after = len(flat.non_flat_interior_vertices) + len(flat.non_flat_faces)
    return PerturbResult(cur, defect_count, defects_before, after)


# -- coarsening --------------------------------------------------------------------------


def coarsen(m: PlanarMap, pq: PQParams, steps: int, seed: int) -> PlanarMap:
    """Merge faces and contract edges at random, keeping the (p,q) property.

    Deleting an edge between two distinct bounded faces merges them;
    contracting an edge merges its endpoints.  Both moves are only taken
    when every face and vertex they touch keeps a legal degree, so the
    result is a (p,q)-map which typically violates condition (B).
    """
    p, q = pq.p, pq.q
    rng = random.Random(seed)
    cur = m
    for _ in range(steps):
        ext = cur.exterior_vertices
        moves = []
        for e in range(cur.edge_count):
            d = 2 * e
            u, w = cur.origin(d), cur.head(d)
            if u == w:
                continue
            f1, f2 = cur.face_of(d), cur.face_of(d + 1)
            if f1 >= 0 and f2 >= 0 and f1 != f2:
                if all(cur.vertex_degree(x) - 1 >= (2 if x in ext else q) for x in (u, w)):
                    moves.append(("delete", d))
            if all(f < 0 or cur.face_degree(f) - 1 >= p for f in (f1, f2)):
                if sum(1 for x in cur.rotations[u] if cur.head(x) == w) == 1:
                    moves.append(("contract", d))
        if not moves:
            break
        kind, d = rng.choice(moves)
        b = MapBuilder.from_map(cur)
        if kind == "delete":
            b.delete_edge(d)
        else:
            b.contract_edge(d)
        cur = b.freeze()[0]
    ok, witness = is_pq_map(cur, pq)
    if not ok:
        raise AssertionError(f"coarsening broke the (p,q) property: {witness}")
    return cur
