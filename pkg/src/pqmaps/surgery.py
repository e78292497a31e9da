"""Adjustment of (p,q)-maps to (p,q)*-maps, connecting forests and cutting.

Condition (B): every face has degree below ``2p`` and every vertex degree
below ``2q``.  Condition (D): every face, exterior ones included, has degree
at least ``p``.  A (p,q)-map satisfying both is a (p,q)*-map.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .curvature import PQParams, classify_flat, condition_B, condition_D, is_pq_map
from .errors import PreconditionError, SurgeryError, TheoremViolation
from .planar_map import MapBuilder, PlanarMap, multi_source_distances
from .submap import interior

__all__ = [
    "subdivide_large_faces",
    "split_large_vertices",
    "trim_to_condition_D",
    "TrimResult",
    "adjust",
    "AdjustResult",
    "ConnectingForest",
    "connecting_forest",
    "cut_along_forest",
    "CutResult",
]


def _require_pq(m: PlanarMap, pq: PQParams) -> None:
    pq.require_standard()
    ok, witness = is_pq_map(m, pq)
    if not ok:
        raise PreconditionError(f"not a (p,q)-map: {witness}")


def subdivide_large_faces(m: PlanarMap, pq: PQParams) -> PlanarMap:
    """Cut every face of degree ``>= 2p`` by diagonals until all are below ``2p``.

    Each diagonal joins walk positions ``s`` and ``s + p`` of the face, which
    leaves faces of degrees ``p + 1`` and ``d - p + 1``.  The start ``s`` is
    the first position (from the minimal dart) whose two ends are distinct
    vertices; a loop diagonal is used only when no such position exists.
    """
    _require_pq(m, pq)
    p = pq.pi
    b = MapBuilder.from_map(m)
    queue = [m.faces[f][0] for f in range(m.face_count) if m.face_degree(f) >= 2 * p]
    while queue:
        d0 = queue.pop()
        walk = b.face_walk(d0)
        i0 = walk.index(min(walk))
        walk = walk[i0:] + walk[:i0]
        n = len(walk)
        if n < 2 * p:
            continue
        s = next((s for s in range(n) if b.origin(walk[s]) != b.origin(walk[(s + p) % n])), 0)
        a, c = walk[s], walk[(s + p) % n]
        x = b.insert_edge(a, c)
        # x lies on the piece of degree n - p + 1, which may still be too large
        if n - p + 1 >= 2 * p:
            queue.append(x)
    return b.freeze()[0]


def _outer_wedges(b: MapBuilder, v: int, outer_darts: set[int]) -> list[bool]:
    """``flags[i]`` tells whether the wedge just before ``rot[v][i]`` is outer."""
    return [d in outer_darts for d in b.rot[v]]


def split_large_vertices(m: PlanarMap, pq: PQParams) -> PlanarMap:
    """Split every vertex of degree ``>= 2q`` into vertices of degrees ``q + 1``
    and ``d - q + 1`` joined by a new edge.

    The moved block is ``q`` consecutive darts.  For an exterior vertex the
    block and its two bounding wedges avoid the outer face, so exactly one of
    the two new vertices is exterior.
    """
    _require_pq(m, pq)
    q = pq.qi
    b = MapBuilder.from_map(m)
    while True:
        big = sorted(v for v in b.rot if b.degree(v) >= 2 * q)
        if not big:
            break
        v = big[0]
        rot = b.rot[v]
        n = len(rot)
        outer = set(b.outer_walk())
        flags = _outer_wedges(b, v, outer)
        start = None
        for i in sorted(range(n), key=lambda i: rot[i]):
            # wedges before rot[i], ..., rot[i+q-1] and after rot[i+q-1]
            touched = [flags[(i + j) % n] for j in range(q + 1)]
            if not any(touched):
                start = i
                break
        if start is None:
            raise SurgeryError(f"vertex {v} has no room for a split off the boundary")
        b.split_vertex(v, start, q)
    out = b.freeze()[0]
    if not is_pq_map(out, pq)[0]:
        raise TheoremViolation("vertex splitting broke the (p,q) property")
    return out


@dataclass(frozen=True)
class TrimResult:
    map: PlanarMap | None
    removed: int
    perimeter_before: int
    perimeter_after: int
    area_before: int

    @property
    def emptied(self) -> bool:
        return self.map is None

    def bounds_hold(self, p: int) -> bool:
        area_after = 0 if self.map is None else self.map.area
        return (self.perimeter_after <= (p - 1) * self.perimeter_before
                and self.area_before - area_after <= self.perimeter_before)


def _prune_pendants(b: MapBuilder) -> None:
    stack = [v for v in b.rot if b.degree(v) == 1]
    while stack:
        v = stack.pop()
        if v not in b.rot or b.degree(v) != 1:
            continue
        d = b.rot[v][0]
        w = b.head(d)
        b.delete_edge(d)
        b.remove_vertex(v)
        if w in b.rot and b.degree(w) == 1:
            stack.append(w)


def trim_to_condition_D(m: PlanarMap, pq: PQParams) -> TrimResult:
    """Remove exterior faces of degree below ``p`` (and any pendant edges).

    Each round deletes one boundary edge of the lowest-numbered offending
    face, merging it into the outer face.  Returns ``map=None`` when every
    face disappears.
    """
    pq.require_standard()
    p = pq.pi
    if not condition_B(m, pq):
        raise PreconditionError("condition (B) does not hold")
    cur = m
    removed = 0
    while True:
        bad = [f for f in sorted(cur.exterior_faces) if cur.face_degree(f) < p]
        if not bad:
            break
        f = bad[0]
        d = next(d for d in cur.faces[f] if cur.face_of(d ^ 1) == -1)
        b = MapBuilder.from_map(cur)
        b.delete_edge(d)
        _prune_pendants(b)
        removed += 1
        if b.outer is None or not b.org:
            return TrimResult(None, removed, m.perimeter, 0, m.area)
        cur = b.freeze()[0]
        if cur.face_count == 0:
            return TrimResult(None, removed, m.perimeter, 0, m.area)
    return TrimResult(cur, removed, m.perimeter, cur.perimeter, m.area)


@dataclass(frozen=True)
class AdjustResult:
    map: PlanarMap | None
    subdivided: PlanarMap
    split: PlanarMap
    trim: TrimResult


def adjust(m: PlanarMap, pq: PQParams) -> AdjustResult:
    """Full adjustment: subdivide faces, split vertices, then trim to (D)."""
    s1 = subdivide_large_faces(m, pq)
    s2 = split_large_vertices(s1, pq)
    t = trim_to_condition_D(s2, pq)
    return AdjustResult(t.map, s1, s2, t)


# -- connecting forests --------------------------------------------------------------


@dataclass(frozen=True)
class ConnectingForest:
    """Edges of a forest joining every non-flat element to the boundary.

    ``anchors[i]`` is the boundary vertex of tree ``i`` and ``trees[i]`` its
    edge ids.
    """

    edges: frozenset[int]
    trees: tuple[frozenset[int], ...]
    anchors: tuple[int, ...]

    @property
    def D(self) -> int:
        return len(self.edges)


def _bfs_path_to(m: PlanarMap, start: int, targets: frozenset[int]) -> list[int]:
    """Edge ids of a shortest path from ``start`` to the target set (minimal darts first)."""
    if start in targets:
        return []
    parent = {start: None}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for d in sorted(m.rotations[v]):
            w = m.head(d)
            if w in parent:
                continue
            parent[w] = d
            if w in targets:
                path = []
                x = w
                while parent[x] is not None:
                    path.append(parent[x] >> 1)
                    x = m.origin(parent[x])
                return path
            queue.append(w)
    raise SurgeryError("target set unreachable")


def _forest_raw(m: PlanarMap, pq: PQParams) -> set[int]:
    """Edge set (possibly cyclic) built by the recursion over the interior."""
    flat = classify_flat(m, pq)
    boundary = m.exterior_vertices
    edges: set[int] = set()
    dec = interior(m)
    covered_vertices: set[int] = set()
    for comp in dec.components:
        sub, vmap = comp.to_map()
        inv = {i: v for v, i in vmap.items()}
        # edge ids of the submap correspond to the sorted parent edge ids
        emap = {i: e for i, e in enumerate(sorted(comp.edges))}
        inner = _forest_raw(sub, pq)
        forest_sub = _bfs_forest(sub, inner)
        edges |= {emap[e] for e in forest_sub}
        covered_vertices |= {v for v in comp.vertices if v not in comp.boundary_vertices}
        terminals = set()
        for e in forest_sub:
            for d in (2 * e, 2 * e + 1):
                if sub.origin(d) in sub.exterior_vertices:
                    terminals.add(inv[sub.origin(d)])
        sflat = classify_flat(sub, pq)
        for f in sorted(sflat.non_flat_faces):
            vs = sub.face_vertices(f)
            if not any(x in sub.exterior_vertices for x in vs):
                continue
            if any(inv[x] in terminals for x in vs):
                continue
            terminals.add(inv[min(x for x in vs if x in sub.exterior_vertices)])
        for t in sorted(terminals):
            edges |= set(_bfs_path_to(m, t, boundary))
    for v in sorted(flat.non_flat_interior_vertices):
        if v not in covered_vertices:
            edges |= set(_bfs_path_to(m, v, boundary))
    return edges


def _bfs_forest(m: PlanarMap, edges: set[int]) -> set[int]:
    """Breadth-first forest of ``edges`` rooted at the boundary vertices."""
    boundary = m.exterior_vertices
    adj: dict[int, list[int]] = {}
    for e in sorted(edges):
        u, w = m.origin(2 * e), m.origin(2 * e + 1)
        adj.setdefault(u, []).append(e)
        adj.setdefault(w, []).append(e)
    seen = set(v for v in adj if v in boundary)
    queue = deque(sorted(seen))
    tree: set[int] = set()
    while queue:
        v = queue.popleft()
        for e in adj.get(v, []):
            u, w = m.origin(2 * e), m.origin(2 * e + 1)
            x = w if u == v else u
            if x in seen:
                continue
            seen.add(x)
            tree.add(e)
            queue.append(x)
    return tree


def _prune_forest(m: PlanarMap, pq: PQParams, tree: set[int]) -> set[int]:
    flat = classify_flat(m, pq)
    boundary = m.exterior_vertices
    needed_vertices = set(flat.non_flat_interior_vertices)
    face_verts = {f: set(m.face_vertices(f)) for f in flat.non_flat_faces}
    tree = set(tree)
    changed = True
    while changed:
        changed = False
        inc: dict[int, list[int]] = {}
        for e in tree:
            for d in (2 * e, 2 * e + 1):
                inc.setdefault(m.origin(d), []).append(e)
        present = set(inc) | set(boundary)
        for v in sorted(inc):
            if len(inc[v]) != 1 or v in boundary or v in needed_vertices:
                continue
            if any(v in vs and not ((vs - {v}) & present) for vs in face_verts.values()):
                continue
            tree.discard(inc[v][0])
            changed = True
            break
    return tree


def _check_forest(m: PlanarMap, pq: PQParams, forest: ConnectingForest) -> None:
    flat = classify_flat(m, pq)
    boundary = m.exterior_vertices
    touched = set(boundary)
    for e in forest.edges:
        touched.add(m.origin(2 * e))
        touched.add(m.origin(2 * e + 1))
    for v in flat.non_flat_interior_vertices:
        if v not in touched:
            raise TheoremViolation(f"non-flat vertex {v} is not connected")
    for f in flat.non_flat_faces:
        if not any(v in touched for v in m.face_vertices(f)):
            raise TheoremViolation(f"non-flat face {f} is not connected")
    for tree, anchor in zip(forest.trees, forest.anchors):
        verts = {m.origin(d) for e in tree for d in (2 * e, 2 * e + 1)}
        if len(verts) != len(tree) + 1:
            raise TheoremViolation("forest has a cycle")
        if len(verts & boundary) != 1 or anchor not in verts:
            raise TheoremViolation("a tree does not meet the boundary exactly once")
    if forest.D > (pq.p - 1) * m.perimeter:
        raise TheoremViolation(f"forest has {forest.D} edges, above (p-1)n")


def connecting_forest(m: PlanarMap, pq: PQParams) -> ConnectingForest:
    """Forest joining every non-flat face and vertex of a (p,q)*-map to the boundary.

    Built recursively: the forest of each interior component is joined to
    the boundary by shortest paths from its terminals, and the remaining
    non-flat interior vertices get shortest paths of their own.  A
    breadth-first forest of the union then removes cycles and superfluous
    leaves are pruned.
    """
    _require_pq(m, pq)
    if not (condition_B(m, pq) and condition_D(m, pq)):
        raise PreconditionError("map is not a (p,q)*-map")
    raw = _forest_raw(m, pq)
    tree = _prune_forest(m, pq, _bfs_forest(m, raw))
    boundary = m.exterior_vertices
    # split into trees
    adj: dict[int, list[int]] = {}
    for e in tree:
        for d in (2 * e, 2 * e + 1):
            adj.setdefault(m.origin(d), []).append(e)
    trees, anchors = [], []
    seen_edges: set[int] = set()
    for root in sorted(v for v in adj if v in boundary):
        comp: set[int] = set()
        stack = [root]
        seen_v = {root}
        while stack:
            v = stack.pop()
            for e in adj[v]:
                if e in comp:
                    continue
                comp.add(e)
                u, w = m.origin(2 * e), m.origin(2 * e + 1)
                x = w if u == v else u
                if x not in seen_v:
                    seen_v.add(x)
                    stack.append(x)
        if comp and not comp & seen_edges:
            seen_edges |= comp
            trees.append(frozenset(comp))
            anchors.append(root)
    forest = ConnectingForest(frozenset(tree), tuple(trees), tuple(anchors))
    _check_forest(m, pq, forest)
    return forest


# -- cutting ----------------------------------------------------------------------------


@dataclass(frozen=True)
class CutResult:
    map: PlanarMap
    perimeter_before: int
    D: int


def cut_along_forest(m: PlanarMap, forest: ConnectingForest, pq: PQParams | None = None) -> CutResult:
    """Cut ``m`` open along every forest edge, starting at the boundary.

    Each cut doubles one edge and splits its boundary endpoint, so the
    perimeter grows by exactly two while the faces stay the same.  When
    ``pq`` is given the flatness of the resulting interior is verified.
    """
    if any(not 0 <= e < m.edge_count for e in forest.edges):
        raise PreconditionError("forest edge not in the map")
    b = MapBuilder.from_map(m)
    todo = set(forest.edges)
    while todo:
        outer = b.outer_walk()
        on_boundary = {b.origin(d) for d in outer}
        choice = None
        for e in sorted(todo):
            for d in (2 * e, 2 * e + 1):
                if b.origin(d) in on_boundary:
                    choice = d
                    break
            if choice is not None:
                break
        if choice is None:
            raise PreconditionError("forest edges do not reach the boundary")
        a = b.origin(choice)
        # the first outer corner met turning counterclockwise from the cut dart
        rot = b.rot[a]
        i = rot.index(choice)
        outer_set = set(outer)
        corner = next(rot[(i + t) % len(rot)] for t in range(1, len(rot) + 1)
                      if rot[(i + t) % len(rot)] in outer_set)
        if corner == choice:
            raise PreconditionError("forest edge lies on the boundary")
        b.cut_edge_from_boundary(choice, corner)
        todo.discard(choice >> 1)
    out = b.freeze()[0]
    D = len(forest.edges)
    if out.perimeter != m.perimeter + 2 * D or out.area != m.area:
        raise TheoremViolation("cutting changed the area or the perimeter arithmetic")
    if pq is not None:
        _check_cut(out, pq)
    return CutResult(out, m.perimeter, D)


def _check_cut(m: PlanarMap, pq: PQParams) -> None:
    flat = classify_flat(m, pq)
    weak = m.weakly_exterior_faces
    weak_vertices = {v for f in weak for v in m.face_vertices(f)} | set(m.exterior_vertices)
    for f in flat.non_flat_faces:
        if f not in weak:
            raise TheoremViolation(f"non-flat face {f} is not weakly exterior after cutting")
    for v in flat.non_flat_interior_vertices:
        if v not in weak_vertices:
            raise TheoremViolation(f"non-flat vertex {v} is not weakly exterior after cutting")
    for comp in interior(m).components:
        inner = comp.vertices - comp.boundary_vertices
        if any(m.face_degree(f) != pq.p for f in comp.faces) or \
                any(m.vertex_degree(v) != pq.q for v in inner):
            raise TheoremViolation("an interior component is not flat after cutting")
