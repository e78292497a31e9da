import json
import subprocess
import sys

import pytest

from pqmaps.cli import main
from pqmaps.generators import gen_standard, polygon_map
from pqmaps.planar_map import MapBuilder, multi_source_distances, parse, serialize


@pytest.fixture
def grid(tmp_path):
    path = tmp_path / "s4_2.pqm"
    path.write_text(serialize(gen_standard(4, 2)))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_validate_ok(capsys, grid):
    code, data = report(capsys, "validate", grid)
    assert code == 0 and data["ok"]


def test_validate_bad_file(capsys, tmp_path):
    bad = tmp_path / "bad.pqm"
    bad.write_text("pqm 1\nvertices 1\nedges 2\nrot 0: 0 1 2\nouter 0\n")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2 and "twin" in err


def test_missing_file_and_usage(capsys, tmp_path):
    assert run(capsys, "stats", str(tmp_path / "nope.pqm"))[0] == 2
    assert run(capsys, "stats")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "validate", "--bogus", "x")[0] == 2


def test_check_all_grid(capsys, grid):
    code, data = report(capsys, "check", "--all", "--p", "4", "--q", "4", grid)
    assert code == 0 and data["ok"]
    assert data["contraction"]["slack"] == "4/1"
    assert data["bounds"]["entries"]["area_main"]["holds"] is True
    assert data["perimeter_inequality_slack"] == "14/1"


def test_check_anomaly_reported(capsys, tmp_path):
    path = tmp_path / "sq.pqm"
    path.write_text(serialize(polygon_map(4)))
    code, data = report(capsys, "check", str(path))
    assert code == 0
    assert data["bounds"]["entries"]["weak_faces_by_degrees"]["skipped"] == "Area < 2"


def test_stats_and_curvature(capsys, grid):
    code, data = report(capsys, "stats", grid)
    assert code == 0 and data["radius"] == 2 and data["perimeter"] == 16
    code, data = report(capsys, "curvature", "--p", "4", grid)
    assert code == 0 and data["is_pq_map"] and data["identity_holds"]
    code, data = report(capsys, "curvature", "--relaxed", "--p", "5", grid)
    assert code == 0 and data["q"] == "10/3" and data["identity_holds"]
    assert run(capsys, "curvature", "--p", "5", "--q", "3", grid)[0] == 2


def test_structure_commands(capsys, grid):
    assert report(capsys, "flat-radius", grid)[1]["flat_ball_radius"] == 1
    assert report(capsys, "interior", grid)[1]["y_length"] == 8
    assert report(capsys, "forest", grid)[1]["D"] == 0
    code, data = report(capsys, "cut", grid)
    assert code == 0 and data["D"] == 0
    code, data = report(capsys, "corridor", "--edge", "5", "--collapse", grid)
    assert code == 0 and data["after"]["faces"] == data["length"] * 3


def test_shell_command(capsys, tmp_path):
    path = tmp_path / "g.pqm"
    m = gen_standard(4, 4)
    path.write_text(serialize(m))
    depth = multi_source_distances(m, m.exterior_vertices)
    centre = depth.index(max(depth))
    code, data = report(capsys, "shell", "--center", str(centre), "--r", "1", str(path))
    assert code == 0 and data["simple"] and len(data["faces"]) == 4
    assert run(capsys, "shell", "--center", str(centre), "--r", "9", str(path))[0] == 2


def test_adjust_trim_out(capsys, tmp_path):
    path = tmp_path / "oct.pqm"
    path.write_text(serialize(polygon_map(9)))
    out = tmp_path / "adj.pqm"
    code, data = report(capsys, "adjust", "--out", str(out), str(path))
    assert code == 0 and data["condition_B"]
    m = parse(out.read_text())
    assert max(m.face_degree(f) for f in range(m.face_count)) < 8
    code, data = report(capsys, "trim", str(out))
    assert code == 0 and data["bounds_hold"]


def test_angle_commands(capsys, tmp_path, grid):
    code, out, _ = run(capsys, "angles", "--regular", grid)
    assert code == 0 and "angle " in out
    withangles = tmp_path / "a.pqm"
    withangles.write_text(out)
    code, data = report(capsys, "gauss-bonnet", str(withangles))
    assert code == 0 and data["total"] == "2/1"
    code, data = report(capsys, "delta-b", str(withangles))
    assert data["delta"] == "flat" and data["b"] == 4
    code, data = report(capsys, "dense-check", "--r", "2", str(withangles))
    assert code == 0 and data["holds"]
    assert run(capsys, "dense-check", "--r", "1", str(withangles))[0] == 2
    assert run(capsys, "delta-b", grid)[0] == 2


def test_gen_and_dual(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "--standard", "4", "1")
    assert code == 0 and parse(out) == gen_standard(4, 1)
    path = tmp_path / "r.pqm"
    assert run(capsys, "gen", "--random", "4", "4", "--steps", "10", "--seed", "2", "--out", str(path))[0] == 0
    code, out, err = run(capsys, "gen", "--perturb", str(path), "--seed", "1")
    assert code == 0 and "defects" in err
    g = tmp_path / "g.pqm"
    g.write_text(serialize(gen_standard(4, 1)))
    code, out, _ = run(capsys, "dual", str(g))
    d = parse(out)
    assert (d.vertex_count, d.edge_count, d.face_count) == (4, 4, 1)


def test_subdivide7(capsys, tmp_path):
    path = tmp_path / "p.pqm"
    path.write_text(serialize(polygon_map(9)))
    code, data = report(capsys, "subdivide7", "--center", "0", str(path))
    assert code == 0 and data["after"]["faces"] == 3


def test_render_formats(capsys, tmp_path, grid):
    code, out, _ = run(capsys, "render", "--format", "svg", grid)
    assert code == 0 and out.count("<circle") == 25 and out.count("<line") == 40
    code, out, _ = run(capsys, "render", "--format", "dot", grid)
    assert code == 0 and out.count(" -- ") == 40
    png = tmp_path / "g.png"
    assert run(capsys, "render", "--format", "png", "--out", str(png), grid)[0] == 0
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    assert run(capsys, "render", "--format", "png", grid)[0] == 2


def test_render_highlights_pentagon(capsys, tmp_path):
    m = gen_standard(4, 2)
    e = next(e for e in range(m.edge_count) if m.face_of(2 * e) >= 0 and m.face_of(2 * e + 1) == -1)
    b = MapBuilder.from_map(m)
    b.subdivide(2 * e)
    path = tmp_path / "pent.pqm"
    path.write_text(serialize(b.freeze()[0]))
    code, out, _ = run(capsys, "render", "--format", "svg", str(path))
    assert code == 0 and out.count('class="nonflat-face"') == 1
    code, out, _ = run(capsys, "render", "--format", "svg", "--no-highlight", str(path))
    assert 'nonflat-face' not in out


def test_corpus_subprocess_deterministic(tmp_path):
    cmd = [sys.executable, "-m", "pqmaps", "corpus", "--gen", "random:4,4", "--count", "20", "--seed", "9"]
    a = subprocess.run(cmd, capture_output=True, check=False)
    b = subprocess.run(cmd, capture_output=True, check=False)
    assert a.returncode == 0 and a.stdout == b.stdout
    assert json.loads(a.stdout)["theorem_failures"] == 0


def test_corpus_unknown_generator(capsys):
    assert run(capsys, "corpus", "--gen", "bogus:4,4", "--count", "2")[0] == 2
