"""Exact evaluation of the area and boundary bounds, plus corpus aggregation."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from .angles import angle_curvatures, assign_regular, lemma_A_check
from .curvature import PQParams, condition_B, condition_D, is_pq_map, pq_curvatures
from .errors import PQMapError, PreconditionError, TheoremViolation
from .generators import coarsen, gen_random_pq, gen_standard, perturb_defects
from .planar_map import PlanarMap, radius, serialize, validate
from .submap import contraction_check, defect_distance, flat_ball_radius, theorem_radius
from .surgery import adjust

__all__ = [
    "BoundEntry",
    "BoundsReport",
    "bounds_report",
    "CorpusItem",
    "CorpusReport",
    "corpus_check",
    "parse_gen_spec",
    "generate_item",
    "jsonable",
    "dumps",
]

THEOREM_ENTRIES = ("area_main", "area_star")


@dataclass(frozen=True)
class BoundEntry:
    """One inequality ``actual <= bound`` (or ``>=`` for ``boundary_curvature``)."""

    name: str
    relation: str
    bound: Fraction | None
    actual: Fraction | None
    holds: bool | None
    preconditions_met: bool
    skipped: str | None = None

    def as_dict(self) -> dict:
        return {
            "relation": self.relation,
            "bound": self.bound,
            "actual": self.actual,
            "holds": self.holds,
            "preconditions_met": self.preconditions_met,
            "skipped": self.skipped,
        }


def _entry(name, relation, bound, actual, reason=None) -> BoundEntry:
    if reason is not None:
        return BoundEntry(name, relation, None, None, None, False, reason)
    bound, actual = Fraction(bound), Fraction(actual)
    holds = actual <= bound if relation == "<=" else actual >= bound
    return BoundEntry(name, relation, bound, actual, holds, True)


@dataclass(frozen=True)
class BoundsReport:
    n: int
    area_faces: int
    area_vertices: int
    radius: int
    r_defect: int
    r_flatball: int
    r_theorem: int
    star: bool
    entries: dict[str, BoundEntry]
    quadratic_ratio: Fraction

    @property
    def violations(self) -> list[str]:
        return [k for k, e in self.entries.items() if e.holds is False]

    @property
    def theorem_violations(self) -> list[str]:
        return [k for k in self.violations if k in THEOREM_ENTRIES]

    @property
    def holds(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "area_faces": self.area_faces,
            "area_vertices": self.area_vertices,
            "radius": self.radius,
            "r_defect": self.r_defect,
            "r_flatball": self.r_flatball,
            "r_theorem": self.r_theorem,
            "pq_star": self.star,
            "entries": {k: e.as_dict() for k, e in self.entries.items()},
            "quadratic_ratio": self.quadratic_ratio,
            "holds": self.holds,
        }


def bounds_report(m: PlanarMap, pq: PQParams) -> BoundsReport:
    """Evaluate every area and boundary bound on a (p,q)-map.

    Entries whose hypotheses fail are kept with ``holds = None`` and the
    failing hypothesis named in ``skipped``.  ``r`` for the two main area
    bounds is the largest radius of a grown flat simple ball (see
    :func:`pqmaps.submap.theorem_radius`).
    """
    pq.require_standard()
    rep = validate(m)
    if not rep.ok:
        raise PreconditionError(f"invalid map: {', '.join(rep.failures())}")
    if m.face_count == 0:
        raise PreconditionError("map has no faces")
    ok, witness = is_pq_map(m, pq)
    if not ok:
        raise PreconditionError(f"not a (p,q)-map; violation at {witness}")
    p, q = pq.p, pq.q
    n, area = m.perimeter, m.area
    rad = radius(m)
    r_def = defect_distance(m, pq)[1]
    r_flat = flat_ball_radius(m, pq)
    r_thm = theorem_radius(m, pq)
    star = condition_B(m, pq) and condition_D(m, pq)
    cur = pq_curvatures(m, pq)
    weak = len(m.weakly_exterior_faces)
    entries: dict[str, BoundEntry] = {}

    entries["area_main"] = _entry(
        "area_main", "<=", Fraction(3, 2) * (p - 1) * (q + 1) * (r_thm + p) * n, area)
    entries["area_star"] = _entry(
        "area_star", "<=", (Fraction(3) * q / 2 + 1) * (r_thm + p) * n, area,
        None if star else "not a (p,q)*-map")
    not_star = None if star else "not a (p,q)*-map"
    # the lemma holds for every r with radius <= r - 1; the tightest is radius + 1
    entries["area_by_radius"] = _entry("area_by_radius", "<=", q / p * (rad + 1) * n, area, not_star)
    small = "Area < 2" if area < 2 else None
    entries["weak_faces_by_perimeter"] = _entry("weak_faces_by_perimeter", "<=", q / p * n - q, weak, not_star or small)
    entries["area_radius_zero"] = _entry(
        "area_radius_zero", "<=", q * (n - 2) / (2 * p), area,
        not_star or (None if rad == 0 else "radius is not 0"))
    ext = sorted(m.exterior_vertices)
    deg_sum = sum(m.vertex_degree(v) for v in ext)
    entries["weak_faces_by_degrees"] = _entry("weak_faces_by_degrees", "<=", deg_sum - 2 * len(ext), weak, small)
    entries["boundary_curvature"] = _entry("boundary_curvature", ">=", p, cur.I_v_boundary, not_star)
    return BoundsReport(n, area, m.vertex_count, rad, r_def, r_flat, r_thm, star, entries,
                        Fraction(m.vertex_count, n * n))


# -- corpus ------------------------------------------------------------------------------


GENERATORS = ("standard", "random", "perturb", "star", "coarse")


def parse_gen_spec(spec: str) -> tuple[str, PQParams]:
    """``standard:P``, ``random:P,Q``, ``perturb:P,Q``, ``star:P,Q`` or ``coarse:P,Q``."""
    kind, _, args = spec.partition(":")
    if kind not in GENERATORS:
        raise PreconditionError(f"unknown generator {kind!r}; expected one of {', '.join(GENERATORS)}")
    try:
        nums = [int(x) for x in args.split(",") if x.strip()]
    except ValueError:
        raise PreconditionError(f"bad generator arguments {args!r}") from None
    if kind == "standard" and len(nums) == 1:
        nums.append({3: 6, 4: 4, 6: 3}.get(nums[0], 0))
    if len(nums) != 2:
        raise PreconditionError(f"generator {kind} needs P,Q")
    return kind, PQParams(*nums)


def generate_item(kind: str, pq: PQParams, seed: int, index: int) -> PlanarMap:
    """Map number ``index`` of a corpus; depends only on its arguments."""
    rng = random.Random(f"{seed}:{index}")
    p = pq.pi
    if kind == "standard":
        return gen_standard(p, 1 + index % 3)
    if kind in ("random", "star"):
        steps = rng.randint(0, 30)
        small = rng.choice((0, 0, 2)) if kind == "star" else 0
        m = gen_random_pq(pq, steps, rng.getrandbits(32), small_faces=small, start_n=rng.choice((0, 1, 1, 2)))
        if kind == "star":
            out = adjust(m, pq).map
            return out if out is not None else gen_standard(p, 1)
        return m
    if kind == "coarse":
        base = gen_random_pq(pq, rng.randint(0, 20), rng.getrandbits(32), start_n=rng.choice((1, 2)))
        return coarsen(base, pq, rng.randint(1, 25), rng.getrandbits(32))
    if kind == "perturb":
        base = gen_standard(p, rng.choice((2, 3)))
        if rng.random() < 0.5:
            base = gen_random_pq(pq, rng.randint(0, 15), rng.getrandbits(32), start_n=2)
        return perturb_defects(base, pq, rng.randint(1, 2), rng.getrandbits(32)).map
    raise PreconditionError(f"unknown generator {kind!r}")


@dataclass
class CorpusItem:
    index: int
    vertices: int
    faces: int
    perimeter: int
    violations: list[str] = field(default_factory=list)
    theorem_failures: list[str] = field(default_factory=list)
    skipped: dict[str, int] = field(default_factory=dict)
    quadratic_ratio: Fraction = Fraction(0)


@dataclass
class CorpusReport:
    gen: str
    count: int
    seed: int
    angles: bool
    items: list[CorpusItem]
    minimal_failure: str | None = None

    @property
    def theorem_failures(self) -> int:
        return sum(1 for it in self.items if it.theorem_failures)

    @property
    def ok(self) -> bool:
        return self.theorem_failures == 0

    def as_dict(self) -> dict:
        counts: dict[str, int] = {}
        skipped: dict[str, int] = {}
        for it in self.items:
            for v in it.violations + it.theorem_failures:
                counts[v] = counts.get(v, 0) + 1
            for k, c in it.skipped.items():
                skipped[k] = skipped.get(k, 0) + c
        return {
            "gen": self.gen,
            "count": self.count,
            "seed": self.seed,
            "angles": self.angles,
            "maps": len(self.items),
            "violations": counts,
            "skipped": skipped,
            "failing_items": [it.index for it in self.items if it.violations or it.theorem_failures],
            "theorem_failures": self.theorem_failures,
            "max_quadratic_ratio": max((it.quadratic_ratio for it in self.items), default=Fraction(0)),
            "minimal_failure": self.minimal_failure,
            "ok": self.ok,
        }


def _run_checks(m: PlanarMap, pq: PQParams, angles: bool, item: CorpusItem) -> None:
    def guarded(name: str, fn: Callable[[], Any]):
        try:
            return fn()
        except TheoremViolation as exc:
            item.theorem_failures.append(f"{name}: {exc}")
        except PreconditionError:
            item.skipped[name] = item.skipped.get(name, 0) + 1
        return None

    if not validate(m).ok:
        item.theorem_failures.append("validate")
        return
    guarded("curvature_identity", lambda: pq_curvatures(m, pq))
    guarded("contraction", lambda: contraction_check(m, pq))
    rep = guarded("bounds", lambda: bounds_report(m, pq))
    if rep is not None:
        item.quadratic_ratio = rep.quadratic_ratio
        for k, e in rep.entries.items():
            if e.holds is False:
                (item.theorem_failures if k in THEOREM_ENTRIES else item.violations).append(k)
            elif e.holds is None:
                item.skipped[k] = item.skipped.get(k, 0) + 1
    if angles and m.edge_count:
        a = assign_regular(m)
        guarded("gauss_bonnet", lambda: angle_curvatures(m, a))
        guarded("perimeter_inequality", lambda: lemma_A_check(m, a))


def corpus_check(gen_spec: str, count: int, seed: int, *, angles: bool = False,
                 failure_path: str | None = None) -> CorpusReport:
    """Generate ``count`` maps from ``gen_spec`` and run every applicable check.

    Item ``i`` is generated from ``random.Random(f"{seed}:{i}")`` so the
    report does not depend on evaluation order.  When ``failure_path`` is
    given and some item fails, the smallest failing map is written there.
    """
    kind, pq = parse_gen_spec(gen_spec)
    items = []
    maps = {}
    for i in range(count):
        try:
            m = generate_item(kind, pq, seed, i)
        except PQMapError as exc:
            it = CorpusItem(i, 0, 0, 0, theorem_failures=[f"generate: {exc}"])
            items.append(it)
            continue
        it = CorpusItem(i, m.vertex_count, m.face_count, m.perimeter)
        _run_checks(m, pq, angles, it)
        items.append(it)
        if it.violations or it.theorem_failures:
            maps[i] = m
    report = CorpusReport(gen_spec, count, seed, angles, items)
    if maps:
        worst = min(maps, key=lambda i: (maps[i].area, maps[i].vertex_count, i))
        report.minimal_failure = f"item {worst}"
        if failure_path is not None:
            with open(failure_path, "w", encoding="utf-8") as fh:
                fh.write(serialize(maps[worst]))
            report.minimal_failure = f"item {worst} -> {failure_path}"
    return report


# -- machine-readable output -------------------------------------------------------------


def jsonable(obj: Any) -> Any:
    """Convert report values to JSON types; rationals become ``"num/den"``."""
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [jsonable(x) for x in obj]
        return sorted(items, key=repr) if isinstance(obj, (set, frozenset)) else items
    if hasattr(obj, "as_dict"):
        return jsonable(obj.as_dict())
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"
