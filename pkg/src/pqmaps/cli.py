"""Command line interface.

Exit codes: 0 when the command succeeded and every check passed, 1 when a
check or inequality failed, 2 for usage and input errors.  Reports are JSON
with sorted keys; rationals are written as ``"num/den"``.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Callable

from . import analysis, angles, corridor, curvature, generators, planar_map, render, submap, surgery
from .errors import MapFormatError, PQMapError, PreconditionError, TheoremViolation
from .planar_map import PlanarMap

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

_DEFAULT_Q = {3: 6, 4: 4, 6: 3}


# -- helpers --------------------------------------------------------------------------------


def _read(path: str) -> tuple[PlanarMap, dict | None]:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return planar_map.parse_with_angles(text)


def _pq(args) -> curvature.PQParams:
    if getattr(args, "relaxed", False):
        if args.q is None:
            return curvature.PQParams.from_p(args.p)
        return curvature.PQParams(args.p, args.q, relaxed=True)
    q = args.q if args.q is not None else _DEFAULT_Q.get(args.p)
    if q is None:
        raise PreconditionError(f"no default q for p = {args.p}")
    return curvature.PQParams(args.p, q)


def _emit(report, out=None) -> None:
    (out or sys.stdout).write(analysis.dumps(report))


def _write_map(m: PlanarMap, path: str | None, angle_fn=None) -> str | None:
    text = planar_map.serialize(m, angle_fn)
    if path is None:
        return text
    if path == "-":
        sys.stdout.write(text)
        return None
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return None


def _with_map(report: dict, m: PlanarMap | None, path: str | None) -> dict:
    if m is None:
        report["map"] = None
    else:
        text = _write_map(m, path)
        report["map"] = text if text is not None else path
    return report


def _summary(m: PlanarMap | None) -> dict | None:
    if m is None:
        return None
    return {"vertices": m.vertex_count, "edges": m.edge_count, "faces": m.face_count, "perimeter": m.perimeter}


def _angle_fn(m: PlanarMap, stored, regular: bool):
    if regular or stored is None:
        if not regular:
            raise PreconditionError("file has no angle lines; pass --regular")
        return angles.assign_regular(m)
    return stored


# -- commands -------------------------------------------------------------------------------


def cmd_validate(args) -> int:
    m, _ = _read(args.file)
    rep = planar_map.validate(m)
    _emit(rep.as_dict())
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_stats(args) -> int:
    m, _ = _read(args.file)
    s = planar_map.degrees_and_boundary(m)
    _emit({
        "vertices": m.vertex_count,
        "edges": m.edge_count,
        "faces": m.face_count,
        "perimeter": m.perimeter,
        "radius": planar_map.radius(m) if m.edge_count else 0,
        "vertex_degrees": list(s.vertex_degrees),
        "face_degrees": list(s.face_degrees),
        "multiplicity": list(s.multiplicities),
        "boundary_path": list(s.boundary_path),
    })
    return EXIT_OK


def cmd_curvature(args) -> int:
    m, _ = _read(args.file)
    pq = _pq(args)
    rep = curvature.pq_curvatures(m, pq).as_dict()
    try:
        ok, witness = curvature.is_pq_map(m, pq)
    except PreconditionError as exc:
        ok, witness = False, str(exc)
    rep.update({"p": pq.p, "q": pq.q, "identity_holds": True, "is_pq_map": ok, "witness": witness})
    _emit(rep)
    return EXIT_OK


def cmd_flat_radius(args) -> int:
    m, _ = _read(args.file)
    pq = _pq(args)
    ok, witness = curvature.is_pq_map(m, pq)
    if not ok:
        raise PreconditionError(f"not a (p,q)-map; violation at {witness}")
    flat = curvature.classify_flat(m, pq)
    _emit({
        "flat_ball_radius": submap.flat_ball_radius(m, pq),
        "theorem_radius": submap.theorem_radius(m, pq),
        "r_defect": submap.defect_distance(m, pq)[1],
        "non_flat_faces": flat.non_flat_faces,
        "non_flat_interior_vertices": flat.non_flat_interior_vertices,
    })
    return EXIT_OK


def cmd_interior(args) -> int:
    m, _ = _read(args.file)
    dec = submap.interior(m)
    _emit({
        "components": [{"faces": c.faces, "perimeter": c.perimeter, "simple": c.simple} for c in dec.components],
        "y_length": dec.y_length,
    })
    return EXIT_OK


def cmd_shell(args) -> int:
    m, _ = _read(args.file)
    sub = submap.shell_submap(m, args.center, args.r)
    sm = sub.to_map()[0] if sub.simple else None
    _emit(_with_map({"faces": sub.faces, "perimeter": sub.perimeter, "simple": sub.simple}, sm, args.out))
    return EXIT_OK


def cmd_adjust(args) -> int:
    m, _ = _read(args.file)
    pq = _pq(args)
    s1 = surgery.subdivide_large_faces(m, pq)
    s2 = surgery.split_large_vertices(s1, pq)
    ok = curvature.condition_B(s2, pq)
    _emit(_with_map({"before": _summary(m), "after": _summary(s2), "condition_B": ok}, s2, args.out))
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_trim(args) -> int:
    m, _ = _read(args.file)
    pq = _pq(args)
    t = surgery.trim_to_condition_D(m, pq)
    ok = t.bounds_hold(pq.pi)
    _emit(_with_map({
        "before": _summary(m),
        "after": _summary(t.map),
        "removed_edges": t.removed,
        "perimeter_bound": (pq.pi - 1) * t.perimeter_before,
        "area_loss": t.area_before - (t.map.area if t.map else 0),
        "bounds_hold": ok,
    }, t.map, args.out))
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_forest(args) -> int:
    m, _ = _read(args.file)
    pq = _pq(args)
    f = surgery.connecting_forest(m, pq)
    bound = (pq.pi - 1) * m.perimeter
    _emit({"edges": f.edges, "trees": list(f.trees), "anchors": list(f.anchors), "D": f.D,
           "D_bound": bound, "holds": f.D <= bound})
    return EXIT_OK if f.D <= bound else EXIT_VIOLATION


def cmd_cut(args) -> int:
    m, _ = _read(args.file)
    pq = _pq(args)
    f = surgery.connecting_forest(m, pq)
    res = surgery.cut_along_forest(m, f, pq)
    _emit(_with_map({"before": _summary(m), "after": _summary(res.map), "D": res.D,
                     "perimeter_expected": m.perimeter + 2 * res.D}, res.map, args.out))
    return EXIT_OK


def cmd_corridor(args) -> int:
    m, _ = _read(args.file)
    c = corridor.build_corridor(m, args.edge)
    report = {"gluing": list(c.gluing), "faces": list(c.faces), "length": c.length,
              "side_q": c.side_vertices(m, "q"), "side_q_prime": c.side_vertices(m, "q'"),
              "sides_simple": c.sides_simple(m)}
    out = None
    if args.collapse:
        out = corridor.collapse_corridor(m, c).map
        report["log"] = [f"collapse {c.length} faces"]
    elif args.reduce is not None:
        res = corridor.reduce_face_degree(m, c, args.reduce)
        out = res.map
        report["log"] = [f"reduce face {c.faces[args.reduce - 1]} from degree "
                         f"{m.face_degree(c.faces[args.reduce - 1])}"]
    if out is not None:
        report["after"] = _summary(out)
        _with_map(report, out, args.out)
    _emit(report)
    return EXIT_OK


def cmd_subdivide7(args) -> int:
    m, _ = _read(args.file)
    out = corridor.distance_preserving_subdivision(m, args.center)
    _emit(_with_map({"before": _summary(m), "after": _summary(out),
                     "log": [f"added {out.edge_count - m.edge_count} diagonals"]}, out, args.out))
    return EXIT_OK


def cmd_angles(args) -> int:
    m, stored = _read(args.file)
    a = _angle_fn(m, stored, args.regular)
    angles.AngleFunction.checked(m, a)
    text = _write_map(m, args.out, a)
    if text is not None:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_gauss_bonnet(args) -> int:
    m, stored = _read(args.file)
    rep = angles.angle_curvatures(m, _angle_fn(m, stored, args.regular))
    d = rep.as_dict()
    d["total"] = rep.I_f + rep.I_v
    d["holds"] = True
    _emit(d)
    return EXIT_OK


def cmd_delta_b(args) -> int:
    m, stored = _read(args.file)
    _emit(angles.delta_b_params(m, _angle_fn(m, stored, args.regular)).as_dict())
    return EXIT_OK


def cmd_dense_check(args) -> int:
    m, stored = _read(args.file)
    rep = angles.dense_bound_check(m, _angle_fn(m, stored, args.regular), args.r)
    _emit(rep.as_dict())
    return EXIT_OK if rep.holds else EXIT_VIOLATION


def cmd_check(args) -> int:
    m, stored = _read(args.file)
    pq = _pq(args)
    report: dict = {"validate": planar_map.validate(m).as_dict()}
    report["curvature"] = curvature.pq_curvatures(m, pq).as_dict()
    try:
        c = submap.contraction_check(m, pq)
        report["contraction"] = {"x": c.x_length, "y": c.y_length, "J": c.J, "p": c.p, "slack": c.slack}
    except PreconditionError as exc:
        report["contraction"] = {"skipped": str(exc)}
    b = analysis.bounds_report(m, pq)
    report["bounds"] = b.as_dict()
    ok = b.holds
    if args.all and m.edge_count:
        a = stored if stored is not None else angles.assign_regular(m)
        gb = angles.angle_curvatures(m, a)
        report["gauss_bonnet"] = {"I_f": gb.I_f, "I_v": gb.I_v, "total": gb.I_f + gb.I_v}
        try:
            report["perimeter_inequality_slack"] = angles.lemma_A_check(m, a)
        except PreconditionError as exc:
            report["perimeter_inequality_slack"] = {"skipped": str(exc)}
        try:
            d = angles.dense_bound_check(m, a)
            report["dense"] = d.as_dict()
            ok = ok and d.holds
        except PreconditionError as exc:
            report["dense"] = {"skipped": str(exc)}
    report["ok"] = ok
    _emit(report)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_corpus(args) -> int:
    rep = analysis.corpus_check(args.gen, args.count, args.seed, angles=args.angles,
                                failure_path=args.failure_out)
    _emit(rep.as_dict())
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_gen(args) -> int:
    if args.standard:
        p, n = args.standard
        m = generators.gen_standard(p, n)
    elif args.random:
        pq = curvature.PQParams(*args.random)
        m = generators.gen_random_pq(pq, args.steps, args.seed)
    else:
        base, _ = _read(args.perturb)
        res = generators.perturb_defects(base, _pq(args), args.defects, args.seed)
        m = res.map
        sys.stderr.write(f"defects before {res.defects_before}, after {res.defects_after}\n")
    text = _write_map(m, args.out)
    if text is not None:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_dual(args) -> int:
    m, _ = _read(args.file)
    text = _write_map(planar_map.weak_dual(m), args.out)
    if text is not None:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_render(args) -> int:
    m, _ = _read(args.file)
    pq = _pq(args) if args.highlight else None
    data = render.render(m, args.format, pq)
    if args.out is None:
        if args.format == "png":
            raise PreconditionError("PNG output needs --out")
        sys.stdout.write(data.decode())
    else:
        with open(args.out, "wb") as fh:
            fh.write(data)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------------


def _add_pq(sp, kind=int) -> None:
    sp.add_argument("--p", type=kind, default=kind(4), help="face parameter (default 4)")
    sp.add_argument("--q", type=kind, default=None, help="vertex parameter (default: matching p)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pqmaps", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name: str, fn: Callable, help: str, *, file=True, pq=False, out=False, angle=False):
        sp = sub.add_parser(name, help=help, description=help)
        if file:
            sp.add_argument("file", help="pqm 1 map file, or - for stdin")
        if pq:
            _add_pq(sp)
        if out:
            sp.add_argument("--out", help="write the resulting map here (- for stdout)")
        if angle:
            sp.add_argument("--regular", action="store_true", help="use the regular angle (d-2)/d on a d-gon")
        sp.set_defaults(func=fn)
        return sp

    add("validate", cmd_validate, "check that a file describes a planar map")
    add("stats", cmd_stats, "degrees, boundary path and radius")
    sp = add("curvature", cmd_curvature, "(p,q)-curvature report")
    _add_pq(sp, Fraction)
    sp.add_argument("--relaxed", action="store_true",
                    help="allow any rational pair with 1/p + 1/q = 1/2 (q defaults to 2p/(p-2))")
    add("flat-radius", cmd_flat_radius, "radii of flat simple balls and distance to defects", pq=True)
    add("interior", cmd_interior, "components of the interior")
    sp = add("shell", cmd_shell, "shell submap around a vertex", out=True)
    sp.add_argument("--center", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    add("adjust", cmd_adjust, "subdivide large faces and split large vertices", pq=True, out=True)
    add("trim", cmd_trim, "remove exterior faces of degree below p", pq=True, out=True)
    add("forest", cmd_forest, "connecting forest of non-flat elements", pq=True)
    add("cut", cmd_cut, "cut along the connecting forest", pq=True, out=True)
    sp = add("corridor", cmd_corridor, "maximal corridor through an edge of a (4,4)-map", out=True)
    sp.add_argument("--edge", type=int, required=True)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--collapse", action="store_true")
    g.add_argument("--reduce", type=int, metavar="T", help="reduce the degree of corridor face T (1-based)")
    sp = add("subdivide7", cmd_subdivide7, "split faces of degree >= 7 keeping distances to a vertex", out=True)
    sp.add_argument("--center", type=int, required=True)
    add("angles", cmd_angles, "write the map with an angle function", out=True, angle=True)
    add("gauss-bonnet", cmd_gauss_bonnet, "angle curvatures and the Gauss-Bonnet total", angle=True)
    add("delta-b", cmd_delta_b, "(delta, b) parameters of an angle function", angle=True)
    sp = add("dense-check", cmd_dense_check, "area bound for (delta, b)-maps", angle=True)
    sp.add_argument("--r", type=int, default=None, help="radius to use (must not be below the actual one)")
    sp = add("check", cmd_check, "all bounds for a (p,q)-map", pq=True)
    sp.add_argument("--all", action="store_true", help="also run the angle checks")
    sp = add("corpus", cmd_corpus, "run every check on a generated corpus", file=False)
    sp.add_argument("--gen", required=True, help="standard:P, random:P,Q, perturb:P,Q, star:P,Q or coarse:P,Q")
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--angles", action="store_true", help="include Gauss-Bonnet and the perimeter inequality")
    sp.add_argument("--failure-out", help="write the smallest failing map here")
    sp = add("gen", cmd_gen, "generate a map", file=False, out=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--standard", type=int, nargs=2, metavar=("P", "N"))
    g.add_argument("--random", type=int, nargs=2, metavar=("P", "Q"))
    g.add_argument("--perturb", metavar="FILE")
    sp.add_argument("--steps", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--defects", type=int, default=1)
    _add_pq(sp)
    add("dual", cmd_dual, "weak dual", out=True)
    sp = add("render", cmd_render, "draw a map (Graphviz source or a straight-line picture)", pq=True)
    sp.add_argument("--format", choices=("dot", "svg", "png"), default="svg")
    sp.add_argument("--out", help="output file (required for png)")
    sp.add_argument("--no-highlight", dest="highlight", action="store_false",
                    help="do not highlight non-flat faces and vertices")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except TheoremViolation as exc:
        sys.stderr.write(f"violation: {exc}\n")
        return EXIT_VIOLATION
    except MapFormatError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (PQMapError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
