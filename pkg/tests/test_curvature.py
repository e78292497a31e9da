from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import PAIRS, sample_maps
from pqmaps.curvature import (
    PQParams,
    classify_flat,
    condition_B,
    condition_D,
    is_pq_map,
    is_pq_star,
    pq_curvatures,
)
from pqmaps.errors import PreconditionError
from pqmaps.generators import gen_standard, polygon_map
from pqmaps.planar_map import PlanarMap

MAPS = sample_maps(202, 45)


def test_pair_validation():
    with pytest.raises(PreconditionError):
        PQParams(5, 5)
    with pytest.raises(PreconditionError):
        PQParams(5, Fraction(10, 3))
    r = PQParams(5, Fraction(10, 3), relaxed=True)
    assert 1 / r.p + 1 / r.q == Fraction(1, 2)
    assert PQParams.from_p(Fraction(7, 2)).q == Fraction(14, 3)


def test_square_curvatures():
    m = polygon_map(4)
    rep = pq_curvatures(m, PQParams(4, 4))
    # every corner vertex: (4/4)(4 - 2) - 1 = 1
    assert rep.vertex_curvatures == (1, 1, 1, 1)
    assert rep.I_f == 0 and rep.I_v_boundary == 4 and rep.J == 0


@pytest.mark.parametrize("p,q", PAIRS)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_standard_maps_are_flat(p, q, n):
    m = gen_standard(p, n)
    pq = PQParams(p, q)
    assert is_pq_map(m, pq) == (True, None)
    flat = classify_flat(m, pq)
    assert not flat.non_flat_faces and not flat.non_flat_interior_vertices
    rep = pq_curvatures(m, pq)
    assert rep.I_f == 0 and rep.I_v_interior == 0 and rep.I_v_boundary == p


def test_degree_one_vertex_is_precondition_error():
    m = PlanarMap([[0], [1]], 0)
    with pytest.raises(PreconditionError):
        is_pq_map(m, PQParams(4, 4))


def test_witnesses():
    # every triangle of S^3_1 touches the boundary, so only degrees of interior elements matter
    assert is_pq_map(gen_standard(3, 1), PQParams(4, 4)) == (True, None)
    ok, witness = is_pq_map(gen_standard(3, 2), PQParams(4, 4))
    assert not ok and witness[0] == "face"
    ok, witness = is_pq_map(gen_standard(6, 2), PQParams(3, 6))
    assert not ok and witness[0] == "vertex"


def test_conditions_on_polygons():
    pq = PQParams(4, 4)
    assert condition_B(polygon_map(7), pq) and not condition_B(polygon_map(8), pq)
    assert condition_D(polygon_map(4), pq) and not condition_D(polygon_map(3), pq)
    assert is_pq_star(polygon_map(5), pq)


@given(st.integers(0, len(MAPS) - 1), st.sampled_from(PAIRS))
def test_identity_standard_pairs(idx, pair):
    _, m = MAPS[idx]
    if m.edge_count == 0:
        return
    rep = pq_curvatures(m, PQParams(*pair))
    assert rep.I_v + rep.I_f == pair[0]
    assert rep.I_v == rep.I_v_interior + rep.I_v_boundary


@given(st.integers(0, len(MAPS) - 1), st.fractions(min_value=Fraction(21, 10), max_value=50))
def test_identity_relaxed_pairs(idx, p):
    _, m = MAPS[idx]
    pq = PQParams.from_p(p)
    assert pq_curvatures(m, pq).I_v + pq_curvatures(m, pq).I_f == p


@given(st.integers(0, len(MAPS) - 1))
def test_defect_set_contents(idx):
    pq, m = MAPS[idx]
    flat = classify_flat(m, pq)
    assert m.exterior_vertices <= flat.defect_set
    for f in flat.non_flat_faces:
        assert set(m.face_vertices(f)) <= flat.defect_set
    assert flat.flat_faces.isdisjoint(flat.non_flat_faces)
