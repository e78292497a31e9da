"""Finite plane maps stored as rotation systems over darts.

Edge ``k`` owns the two darts ``2k`` and ``2k + 1``; the twin of a dart is
``d ^ 1``.  Every vertex carries the counterclockwise cyclic list of darts
leaving it.  Faces are the orbits of the face successor

    phi(d) = sigma(twin(d))

where ``sigma`` is the rotation successor at the origin of its argument.
With counterclockwise rotations this walks every bounded face clockwise
(face on the right); the remaining orbit, walked counterclockwise around
the whole map, is designated as the outer face.

A corner of a bounded face is identified with the dart of the face walk that
leaves the corner vertex, which gives angle functions a canonical key.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InvalidMapError, MapFormatError

__all__ = [
    "PlanarMap",
    "MapBuilder",
    "ValidationReport",
    "DegreeSummary",
    "validate",
    "degrees_and_boundary",
    "distances",
    "multi_source_distances",
    "radius",
    "ball",
    "weak_dual",
    "parse",
    "parse_with_angles",
    "serialize",
    "single_vertex_map",
]


def twin(d: int) -> int:
    return d ^ 1


class PlanarMap:
    """Immutable rotation-system map with a designated outer face.

    ``rotations[v]`` is the counterclockwise tuple of darts leaving ``v``.
    ``outer_dart`` is any dart of the outer face orbit, or ``None`` for the
    one-vertex map.  Pass ``check=False`` to build an object that may violate
    the map axioms (only :func:`validate` should look at such objects).
    """

    __slots__ = ("rotations", "outer_dart", "_origin", "_pos", "__dict__")

    def __init__(self, rotations: Sequence[Sequence[int]], outer_dart: int | None, *, check: bool = True):
        self.rotations = tuple(tuple(r) for r in rotations)
        self.outer_dart = outer_dart
        ndarts = sum(len(r) for r in self.rotations)
        origin = [-1] * ndarts
        pos = [-1] * ndarts
        for v, rot in enumerate(self.rotations):
            for i, d in enumerate(rot):
                if 0 <= d < ndarts and origin[d] == -1:
                    origin[d] = v
                    pos[d] = i
        self._origin = origin
        self._pos = pos
        if check:
            report = validate(self)
            if not report.ok:
                raise InvalidMapError("; ".join(report.failures()))

    # -- basic counts ---------------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self.rotations)

    @property
    def dart_count(self) -> int:
        return len(self._origin)

    @property
    def edge_count(self) -> int:
        return len(self._origin) // 2

    def darts(self) -> range:
        return range(len(self._origin))

    # -- permutations ---------------------------------------------------------

    def origin(self, d: int) -> int:
        return self._origin[d]

    def head(self, d: int) -> int:
        return self._origin[d ^ 1]

    @staticmethod
    def twin(d: int) -> int:
        return d ^ 1

    def sigma(self, d: int) -> int:
        rot = self.rotations[self._origin[d]]
        return rot[(self._pos[d] + 1) % len(rot)]

    def sigma_inv(self, d: int) -> int:
        rot = self.rotations[self._origin[d]]
        return rot[(self._pos[d] - 1) % len(rot)]

    def phi(self, d: int) -> int:
        return self.sigma(d ^ 1)

    def phi_inv(self, d: int) -> int:
        return self.sigma_inv(d) ^ 1

    # -- faces ----------------------------------------------------------------

    @cached_property
    def _orbits(self) -> tuple[list[tuple[int, ...]], list[int]]:
        orbit_of = [-1] * self.dart_count
        orbits: list[tuple[int, ...]] = []
        for d in self.darts():
            if orbit_of[d] != -1:
                continue
            walk = []
            x = d
            while orbit_of[x] == -1:
                orbit_of[x] = len(orbits)
                walk.append(x)
                x = self.phi(x)
            orbits.append(tuple(walk))
        return orbits, orbit_of

    @property
    def orbit_count(self) -> int:
        """Number of face orbits including the outer one (1 for a lone vertex)."""
        if self.dart_count == 0:
            return 1
        return len(self._orbits[0])

    @cached_property
    def _face_data(self) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...], tuple[int, ...]]:
        if self.outer_dart is None:
            return (), (), ()
        orbits, orbit_of = self._orbits
        outer_idx = orbit_of[self.outer_dart]
        bounded = [o for i, o in enumerate(orbits) if i != outer_idx]
        bounded = [_rotate_to_min(o) for o in bounded]
        bounded.sort(key=lambda w: w[0])
        face_of = [-1] * self.dart_count
        for f, walk in enumerate(bounded):
            for d in walk:
                face_of[d] = f
        outer = _rotate_to_min(orbits[outer_idx])
        return tuple(bounded), tuple(face_of), outer

    @property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        """Bounded face walks, each starting at its minimal dart, sorted."""
        return self._face_data[0]

    @property
    def face_count(self) -> int:
        return len(self._face_data[0])

    @property
    def area(self) -> int:
        return len(self._face_data[0])

    def face_of(self, d: int) -> int:
        """Index of the bounded face whose walk contains ``d``; -1 for the outer face."""
        return self._face_data[1][d]

    @property
    def outer_walk(self) -> tuple[int, ...]:
        return self._face_data[2]

    @property
    def perimeter(self) -> int:
        return len(self._face_data[2])

    def face_degree(self, f: int) -> int:
        return len(self._face_data[0][f])

    def vertex_degree(self, v: int) -> int:
        return len(self.rotations[v])

    def face_vertices(self, f: int) -> list[int]:
        return [self._origin[d] for d in self.faces[f]]

    @cached_property
    def vertex_faces(self) -> tuple[frozenset[int], ...]:
        """Bounded faces incident to each vertex."""
        at: list[set[int]] = [set() for _ in range(self.vertex_count)]
        for f, walk in enumerate(self.faces):
            for d in walk:
                at[self._origin[d]].add(f)
        return tuple(frozenset(s) for s in at)

    @cached_property
    def multiplicity(self) -> tuple[int, ...]:
        mu = [0] * self.vertex_count
        for d in self.outer_walk:
            mu[self._origin[d]] += 1
        if self.dart_count == 0 and self.vertex_count == 1:
            mu[0] = 0
        return tuple(mu)

    @cached_property
    def exterior_vertices(self) -> frozenset[int]:
        if self.dart_count == 0:
            return frozenset(range(self.vertex_count))
        return frozenset(self._origin[d] for d in self.outer_walk)

    def is_exterior_vertex(self, v: int) -> bool:
        return v in self.exterior_vertices

    def is_exterior_edge(self, e: int) -> bool:
        return self.face_of(2 * e) == -1 or self.face_of(2 * e + 1) == -1

    @cached_property
    def exterior_faces(self) -> frozenset[int]:
        """Faces sharing an edge with the boundary path."""
        return frozenset(self.face_of(d ^ 1) for d in self.outer_walk if self.face_of(d ^ 1) >= 0)

    @cached_property
    def weakly_exterior_faces(self) -> frozenset[int]:
        """Faces sharing at least a vertex with the boundary path."""
        ext = self.exterior_vertices
        return frozenset(f for f in range(self.face_count)
                         if any(self._origin[d] in ext for d in self.faces[f]))

    @cached_property
    def boundary_path(self) -> tuple[int, ...]:
        """The boundary path: the reversed outer orbit."""
        return tuple(d ^ 1 for d in reversed(self.outer_walk))

    # -- graph ----------------------------------------------------------------

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Neighbour lists (with repetition for multi-edges), in rotation order."""
        return tuple(tuple(self._origin[d ^ 1] for d in rot) for rot in self.rotations)

    def corner_darts(self) -> list[int]:
        """All corners of bounded faces, keyed by dart."""
        return [d for d in self.darts() if self.face_of(d) >= 0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PlanarMap):
            return NotImplemented
        return serialize(self) == serialize(other)

    def __hash__(self) -> int:
        return hash(serialize(self))

    def __repr__(self) -> str:
        return (f"PlanarMap(V={self.vertex_count}, E={self.edge_count}, "
                f"F={self.face_count}, n={self.perimeter})")


def _rotate_to_min(walk: Sequence[int]) -> tuple[int, ...]:
    i = min(range(len(walk)), key=walk.__getitem__)
    return tuple(walk[i:]) + tuple(walk[:i])


def single_vertex_map() -> PlanarMap:
    return PlanarMap(((),), None)


# -- validation ----------------------------------------------------------------


@dataclass
class ValidationReport:
    checks: dict[str, tuple[bool, str]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(ok for ok, _ in self.checks.values())

    def failures(self) -> list[str]:
        return [f"{name}: {msg}" for name, (ok, msg) in self.checks.items() if not ok]

    def as_dict(self) -> dict:
        return {"checks": {name: {"ok": ok, "detail": msg} for name, (ok, msg) in self.checks.items()},
                "ok": self.ok}


def validate(m: PlanarMap) -> ValidationReport:
    """Check the map axioms; never raises, failures are carried in the report."""
    rep = ValidationReport()
    listed = [d for rot in m.rotations for d in rot]
    ndarts = len(listed)
    seen: set[int] = set()
    dup = [d for d in listed if d in seen or seen.add(d)]
    out_of_range = [d for d in listed if not 0 <= d < ndarts]
    partition_ok = not dup and not out_of_range
    rep.checks["rotation_partition"] = (
        partition_ok,
        "every dart appears exactly once" if partition_ok
        else f"duplicated {sorted(set(dup))[:5]} out-of-range {sorted(out_of_range)[:5]}")
    twin_ok = ndarts % 2 == 0 and all((d ^ 1) in seen for d in seen)
    rep.checks["twin_involution"] = (
        twin_ok, "d ^ 1 is a fixed-point-free involution" if twin_ok else "twin involution violated")
    if not (partition_ok and twin_ok):
        return rep

    if m.vertex_count == 0:
        rep.checks["connectivity"] = (False, "no vertices")
        return rep
    # connectivity
    seen_v = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for d in m.rotations[v]:
            w = m.head(d)
            if w not in seen_v:
                seen_v.add(w)
                queue.append(w)
    conn_ok = len(seen_v) == m.vertex_count
    rep.checks["connectivity"] = (
        conn_ok, "1-skeleton connected" if conn_ok else f"{m.vertex_count - len(seen_v)} unreachable vertices")
    euler = m.vertex_count - m.edge_count + m.orbit_count
    rep.checks["euler"] = (euler == 2, f"V - E + F_all = {euler}")
    if m.edge_count == 0:
        outer_ok = m.outer_dart is None
        msg = "one-vertex map has no outer dart" if outer_ok else "outer dart given for an edgeless map"
    else:
        outer_ok = m.outer_dart is not None and 0 <= m.outer_dart < ndarts
        msg = f"outer dart {m.outer_dart}" if outer_ok else f"outer dart {m.outer_dart} out of range"
    rep.checks["single_outer"] = (outer_ok, msg)
    return rep


# -- degrees, distances --------------------------------------------------------


@dataclass(frozen=True)
class DegreeSummary:
    vertex_degrees: tuple[int, ...]
    face_degrees: tuple[int, ...]
    boundary_path: tuple[int, ...]
    multiplicities: tuple[int, ...]

    @property
    def perimeter(self) -> int:
        return len(self.boundary_path)


def degrees_and_boundary(m: PlanarMap) -> DegreeSummary:
    return DegreeSummary(
        vertex_degrees=tuple(m.vertex_degree(v) for v in range(m.vertex_count)),
        face_degrees=tuple(m.face_degree(f) for f in range(m.face_count)),
        boundary_path=m.boundary_path,
        multiplicities=m.multiplicity,
    )


def multi_source_distances(m: PlanarMap, sources: Iterable[int]) -> list[int]:
    """Breadth-first distance to the nearest source; -1 where unreachable."""
    dist = [-1] * m.vertex_count
    queue = deque()
    for s in sources:
        if dist[s] == -1:
            dist[s] = 0
            queue.append(s)
    adj = m.adjacency
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if dist[w] == -1:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def distances(m: PlanarMap, o: int) -> list[int]:
    return multi_source_distances(m, [o])


def radius(m: PlanarMap) -> int:
    """Maximal distance from a vertex to the set of exterior vertices."""
    dist = multi_source_distances(m, m.exterior_vertices)
    return max(dist)


def ball(m: PlanarMap, o: int, d: int) -> set[int]:
    return {v for v, x in enumerate(distances(m, o)) if 0 <= x <= d}


# -- mutable construction -------------------------------------------------------


class MapBuilder:
    """Mutable rotation system used by constructions and surgeries.

    Vertex and edge ids are stable for the lifetime of the builder: new
    elements get fresh ids and deleted ids are never reused, so callers can
    keep referring to darts across several moves.  :meth:`freeze` compacts
    ids and returns the relabelling maps.
    """

    def __init__(self):
        self.rot: dict[int, list[int]] = {}
        self.org: dict[int, int] = {}
        self.outer: int | None = None
        self._next_vertex = 0
        self._next_edge = 0

    @classmethod
    def from_map(cls, m: PlanarMap) -> "MapBuilder":
        b = cls()
        for v, rot in enumerate(m.rotations):
            b.rot[v] = list(rot)
            for d in rot:
                b.org[d] = v
        b._next_vertex = m.vertex_count
        b._next_edge = m.edge_count
        b.outer = m.outer_dart
        return b

    # queries

    def origin(self, d: int) -> int:
        return self.org[d]

    def head(self, d: int) -> int:
        return self.org[d ^ 1]

    def sigma(self, d: int) -> int:
        rot = self.rot[self.org[d]]
        return rot[(rot.index(d) + 1) % len(rot)]

    def sigma_inv(self, d: int) -> int:
        rot = self.rot[self.org[d]]
        return rot[(rot.index(d) - 1) % len(rot)]

    def phi(self, d: int) -> int:
        return self.sigma(d ^ 1)

    def face_walk(self, d: int) -> list[int]:
        walk = [d]
        x = self.phi(d)
        while x != d:
            walk.append(x)
            x = self.phi(x)
        return walk

    def degree(self, v: int) -> int:
        return len(self.rot[v])

    def vertices(self) -> list[int]:
        return sorted(self.rot)

    def outer_walk(self) -> list[int]:
        return self.face_walk(self.outer) if self.outer is not None else []

    # moves

    def add_vertex(self) -> int:
        v = self._next_vertex
        self._next_vertex += 1
        self.rot[v] = []
        return v

    def _new_edge(self) -> int:
        k = self._next_edge
        self._next_edge += 1
        return 2 * k

    def add_edge_raw(self, u: int, w: int) -> int:
        """Append an edge u -> w at the end of both rotations (for generators)."""
        x = self._new_edge()
        self.rot[u].append(x)
        self.org[x] = u
        self.rot[w].append(x ^ 1)
        self.org[x ^ 1] = w
        return x

    def insert_edge(self, a: int, b: int) -> int:
        """Join the corners ``a`` and ``b`` of one face by a new edge.

        A corner is given by the face-walk dart leaving it.  The new dart
        ``x`` runs from ``origin(a)`` to ``origin(b)``; afterwards ``x`` lies
        on the face containing ``b`` and ``twin(x)`` on the face containing
        ``a``.
        """
        if a == b:
            raise ValueError("corners must differ")
        u, w = self.org[a], self.org[b]
        x = self._new_edge()
        ru = self.rot[u]
        ru.insert(ru.index(a), x)
        self.org[x] = u
        rw = self.rot[w]
        rw.insert(rw.index(b), x ^ 1)
        self.org[x ^ 1] = w
        return x

    def subdivide(self, d: int) -> int:
        """Put a new vertex in the middle of the edge of ``d``; returns it.

        ``d`` keeps its origin and now ends at the new vertex; the new edge's
        even dart continues in the direction of ``d``.
        """
        m = self.add_vertex()
        w = self.org[d ^ 1]
        y = self._new_edge()
        rw = self.rot[w]
        rw[rw.index(d ^ 1)] = y ^ 1
        self.org[y ^ 1] = w
        self.org[d ^ 1] = m
        self.org[y] = m
        self.rot[m] = [d ^ 1, y]
        return m

    def _outer_substitute(self, d: int) -> int | None:
        """A dart of the outer walk that survives removing the edge of ``d``."""
        for x in self.face_walk(self.outer):
            if x not in (d, d ^ 1):
                return x
        for x in self.face_walk(self.outer ^ 1):
            if x not in (d, d ^ 1):
                return x
        return None

    def delete_edge(self, d: int) -> None:
        a, b = d, d ^ 1
        if self.outer in (a, b):
            self.outer = self._outer_substitute(d)
        for x in (a, b):
            self.rot[self.org[x]].remove(x)
            del self.org[x]

    def remove_vertex(self, v: int) -> None:
        if self.rot[v]:
            raise ValueError("vertex still has darts")
        del self.rot[v]

    def contract_edge(self, d: int) -> int:
        """Contract a non-loop edge; the origin of ``d`` survives and is returned."""
        u, w = self.org[d], self.org[d ^ 1]
        if u == w:
            raise ValueError("cannot contract a loop")
        ru, rw = self.rot[u], self.rot[w]
        i, j = ru.index(d), rw.index(d ^ 1)
        after_u = ru[i + 1:] + ru[:i]
        after_w = rw[j + 1:] + rw[:j]
        if self.outer in (d, d ^ 1):
            self.outer = self._outer_substitute(d)
        self.rot[u] = after_u + after_w
        for x in after_w:
            self.org[x] = u
        del self.org[d], self.org[d ^ 1]
        del self.rot[w]
        return u

    def split_vertex(self, v: int, start: int, count: int) -> tuple[int, int]:
        """Move ``count`` consecutive darts of ``v`` (from index ``start``) to a new vertex.

        The two vertices are joined by a new edge placed in the two wedges
        created by the split.  Returns ``(new_vertex, new_dart)`` where the
        new dart runs from the new vertex to ``v``.
        """
        rot = self.rot[v]
        n = len(rot)
        moved = [rot[(start + i) % n] for i in range(count)]
        rest = [rot[(start + count + i) % n] for i in range(n - count)]
        nv = self.add_vertex()
        x = self._new_edge()
        self.rot[nv] = moved + [x]
        self.rot[v] = rest + [x ^ 1]
        for d in moved:
            self.org[d] = nv
        self.org[x] = nv
        self.org[x ^ 1] = v
        return nv, x

    def cut_edge_from_boundary(self, d: int, outer_corner: int) -> int:
        """Cut along the edge of ``d`` starting at the boundary vertex ``origin(d)``.

        ``outer_corner`` is an outer-face dart leaving ``origin(d)``; it marks
        the outer wedge at which the vertex is split.  The edge is doubled,
        the slit joins the outer face and the perimeter grows by two.
        Returns the dart of the new copy of the edge (also leaving a copy of
        ``origin(d)``).
        """
        a, b = self.org[d], self.org[d ^ 1]
        ra = self.rot[a]
        i, j = ra.index(d), ra.index(outer_corner)
        # darts of a strictly after d (ccw) up to and excluding the outer corner
        n = len(ra)
        k = (j - i) % n
        if k == 0:
            raise ValueError("outer corner coincides with the cut dart")
        part1 = [ra[(i + t) % n] for t in range(1, k)]
        part2 = [ra[(j + t) % n] for t in range(n - k + 1)]  # outer corner .. d
        y = self._new_edge()
        a2 = self.add_vertex()
        # d stays on a with the tail part2, copy y goes with part1 on a2
        self.rot[a] = part2
        self.rot[a2] = [y] + part1
        for x in part1:
            self.org[x] = a2
        self.org[y] = a2
        rb = self.rot[b]
        rb.insert(rb.index(d ^ 1), y ^ 1)
        self.org[y ^ 1] = b
        return y

    def freeze(self, outer: int | None = None) -> tuple[PlanarMap, dict[int, int], dict[int, int]]:
        """Compact ids and build an immutable map.

        Returns ``(map, dart_map, vertex_map)`` translating builder ids to
        the ids of the new map.
        """
        outer = self.outer if outer is None else outer
        vmap = {v: i for i, v in enumerate(sorted(self.rot))}
        edges = sorted({d >> 1 for d in self.org})
        emap = {k: i for i, k in enumerate(edges)}
        dmap = {d: 2 * emap[d >> 1] + (d & 1) for d in self.org}
        rotations = [[dmap[d] for d in self.rot[v]] for v in sorted(self.rot)]
        new_outer = dmap[outer] if outer is not None and dmap else None
        return PlanarMap(rotations, new_outer), dmap, vmap


# -- weak dual ----------------------------------------------------------------


def weak_dual(m: PlanarMap) -> PlanarMap:
    """Dual vertices are bounded faces, dual edges interior edges.

    The dual's bounded faces correspond to the interior vertices of ``m``.
    """
    if m.face_count == 0:
        raise InvalidMapError("map has no bounded faces")
    interior_edges = [e for e in range(m.edge_count)
                      if m.face_of(2 * e) >= 0 and m.face_of(2 * e + 1) >= 0]
    eid = {e: i for i, e in enumerate(interior_edges)}

    def dual_dart(d: int) -> int:
        return 2 * eid[d >> 1] + (d & 1)

    rotations = []
    for walk in m.faces:
        rotations.append([dual_dart(d) for d in reversed(walk) if (d >> 1) in eid])
    if not interior_edges:
        if m.face_count != 1:
            raise InvalidMapError("weak dual is disconnected")
        return single_vertex_map()
    probe = PlanarMap(rotations, 0, check=False)
    rep = validate(probe)
    if not rep.checks["connectivity"][0]:
        raise InvalidMapError("weak dual is disconnected")
    # dual darts crossing primal edge e from face f; the dual face orbit that
    # circles an interior primal vertex keeps a constant primal head vertex
    orbits, _ = probe._orbits
    inv = {dual_dart(d): d for e in interior_edges for d in (2 * e, 2 * e + 1)}
    outer = None
    for orb in orbits:
        heads = {m.head(inv[x]) for x in orb}
        if len(heads) == 1 and not m.is_exterior_vertex(next(iter(heads))):
            continue
        if outer is not None:
            raise InvalidMapError("weak dual has more than one outer face candidate")
        outer = orb[0]
    return PlanarMap(rotations, outer)


# -- pqm 1 text format ---------------------------------------------------------


def serialize(m: PlanarMap, angles=None) -> str:
    """Canonical ``pqm 1`` text (vertices ascending, rotations from min dart)."""
    lines = ["pqm 1", f"vertices {m.vertex_count}", f"edges {m.edge_count}"]
    for v, rot in enumerate(m.rotations):
        r = _rotate_to_min(rot) if rot else ()
        lines.append(f"rot {v}:" + "".join(f" {d}" for d in r))
    if m.outer_dart is None:
        lines.append("outer none")
    else:
        lines.append(f"outer {min(m.outer_walk) if m.outer_walk else m.outer_dart}")
    if angles:
        for d in sorted(angles):
            c = angles[d]
            lines.append(f"angle {d} {c.numerator}/{c.denominator}")
    return "\n".join(lines) + "\n"


def parse(text: str | bytes) -> PlanarMap:
    return parse_with_angles(text)[0]


def parse_with_angles(text: str | bytes):
    """Parse ``pqm 1`` text; returns ``(map, angles)`` where ``angles`` maps dart -> Fraction or is None."""
    from fractions import Fraction

    if isinstance(text, bytes):
        text = text.decode("utf-8")
    header_seen = False
    nv = ne = None
    rots: dict[int, tuple[list[int], int]] = {}
    outer: int | None | str = "unset"
    outer_line = 0
    angles: dict[int, Fraction] = {}
    dart_line: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not header_seen:
            if line.split() != ["pqm", "1"]:
                raise MapFormatError("header", f"expected 'pqm 1', got {line!r}", lineno)
            header_seen = True
            continue
        key, _, rest = line.partition(" ")
        try:
            if key == "vertices":
                nv = int(rest)
            elif key == "edges":
                ne = int(rest)
            elif key == "rot":
                vs, _, ds = rest.partition(":")
                v = int(vs)
                if v in rots:
                    raise MapFormatError("duplicate-vertex", f"vertex {v} listed twice", lineno)
                darts = [int(x) for x in ds.split()]
                rots[v] = (darts, lineno)
                for d in darts:
                    if d in dart_line:
                        raise MapFormatError("duplicate-dart", f"dart {d} appears twice", lineno)
                    dart_line[d] = lineno
            elif key == "outer":
                outer = None if rest.strip() == "none" else int(rest)
                outer_line = lineno
            elif key == "angle":
                ds, frac = rest.split()
                angles[int(ds)] = Fraction(frac)
            else:
                raise MapFormatError("syntax", f"unknown directive {key!r}", lineno)
        except MapFormatError:
            raise
        except (ValueError, ZeroDivisionError) as exc:
            raise MapFormatError("syntax", f"cannot parse {line!r}: {exc}", lineno) from None
    if not header_seen:
        raise MapFormatError("header", "empty file")
    if nv is None or ne is None:
        raise MapFormatError("header", "missing 'vertices' or 'edges' line")
    if sorted(rots) != list(range(nv)):
        raise MapFormatError("rotation", f"rotation lines must cover vertices 0..{nv - 1}")
    ndarts = 2 * ne
    for d, ln in dart_line.items():
        if not 0 <= d < ndarts:
            raise MapFormatError("dart-range", f"dart {d} outside [0, {ndarts})", ln)
    for d, ln in sorted(dart_line.items()):
        if (d ^ 1) not in dart_line:
            raise MapFormatError("twin", f"twin involution violated: twin({d}) = {d ^ 1} is absent", ln)
    missing = [d for d in range(ndarts) if d not in dart_line]
    if missing:
        raise MapFormatError("missing-dart", f"darts {missing[:6]} missing")
    if outer == "unset":
        raise MapFormatError("outer", "missing 'outer' line")
    if outer is not None and not 0 <= outer < ndarts:
        raise MapFormatError("outer", f"outer dart {outer} out of range", outer_line)
    if outer is None and ne > 0:
        raise MapFormatError("outer", "'outer none' only allowed for the one-vertex map", outer_line)
    for v in range(nv):
        if not rots[v][0] and nv > 1:
            raise MapFormatError("connectivity", f"vertex {v} has degree 0", rots[v][1])
    m = PlanarMap([rots[v][0] for v in range(nv)], outer, check=False)
    rep = validate(m)
    if not rep.checks["connectivity"][0]:
        raise MapFormatError("connectivity", "1-skeleton is disconnected")
    if not rep.checks["euler"][0]:
        raise MapFormatError("euler", f"Euler relation fails ({rep.checks['euler'][1]}), not a plane map")
    m = PlanarMap(m.rotations, outer)
    for d in angles:
        if not 0 <= d < ndarts or m.face_of(d) < 0:
            raise MapFormatError("angle", f"angle on dart {d} which is not a bounded-face corner")
        if angles[d] < 0:
            raise MapFormatError("angle", f"negative angle on dart {d}")
    return m, (angles or None)
