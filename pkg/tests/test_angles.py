import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import PAIRS, sample_maps, star_maps
from pqmaps.angles import (
    PI_HIGH,
    PI_LOW,
    AngleFunction,
    angle_curvatures,
    assign_regular,
    ball_bound_check,
    compare_with_pi,
    delta_b_params,
    dense_bound_check,
    lemma_A_check,
    random_angles,
)
from pqmaps.curvature import PQParams
from pqmaps.errors import PreconditionError
from pqmaps.generators import gen_standard, polygon_map
from pqmaps.planar_map import MapBuilder, single_vertex_map

MAPS = [m for _, m in sample_maps(404, 45) if m.edge_count]
F = Fraction


def test_pi_enclosure():
    assert PI_LOW < math.pi < PI_HIGH
    assert compare_with_pi(F(3), F(0), F(1)) is True
    assert compare_with_pi(F(4), F(0), F(1)) is False
    assert compare_with_pi(F(314159, 100000), F(0), F(1)) is None
    assert compare_with_pi(F(5), F(2), F(1)) is True


@pytest.mark.parametrize("d,coef", [(4, F(1, 2)), (6, F(2, 3)), (3, F(1, 3))])
def test_regular_polygon(d, coef):
    m = polygon_map(d)
    a = assign_regular(m)
    assert set(a.values()) == {coef}
    rep = angle_curvatures(m, a)
    assert rep.face_curvatures == (0,)
    assert rep.I_f == 0 and rep.I_v == 2


def test_single_square_lemma_slack():
    m = polygon_map(4)
    assert lemma_A_check(m, assign_regular(m)) == 2


def test_two_by_two_grid():
    m = gen_standard(4, 1)
    rep = angle_curvatures(m, assign_regular(m))
    assert m.face_count == 4
    assert rep.I_v_boundary == 2 and rep.I_f == 0 and rep.I_v_interior == 0
    assert sorted(rep.vertex_curvatures) == [0] * 5 + [F(1, 2)] * 4


def test_grid_lemma_slack():
    m = gen_standard(4, 2)
    assert lemma_A_check(m, assign_regular(m)) == 14


@pytest.mark.parametrize("n", [1, 2, 3])
def test_grids_flat(n):
    p = delta_b_params(gen_standard(4, n), assign_regular(gen_standard(4, n)))
    assert p.flat and p.b == 4
    assert p.as_dict()["delta"] == "flat"


def test_boundary_pentagon_delta():
    m = gen_standard(4, 2)
    e = next(e for e in range(m.edge_count) if m.face_of(2 * e) == -1 or m.face_of(2 * e + 1) == -1)
    b = MapBuilder.from_map(m)
    b.subdivide(2 * e)
    m = b.freeze()[0]
    p = delta_b_params(m, assign_regular(m))
    # two interior vertices see three right angles and one 3pi/5 corner
    assert p.delta == F(1, 10) and p.b == 5


def test_three_pi_corner():
    m = gen_standard(4, 2)
    a = assign_regular(m)
    centre = max(range(m.vertex_count), key=lambda v: (m.vertex_degree(v), v not in m.exterior_vertices))
    corner = next(d for d in a if m.origin(d) == centre and centre not in m.exterior_vertices)
    a[corner] = F(3)
    rep = angle_curvatures(m, a)
    assert rep.vertex_curvatures[m.origin(corner)] == 2 - (3 + F(3, 2))
    with pytest.raises(PreconditionError, match="positive curvature"):
        delta_b_params(m, a)


def test_angle_function_validation():
    m = polygon_map(4)
    a = dict(assign_regular(m))
    a.popitem()
    with pytest.raises(PreconditionError):
        AngleFunction.checked(m, a)
    a = assign_regular(m)
    a[next(iter(a))] = F(-1)
    with pytest.raises(PreconditionError):
        AngleFunction.checked(m, a)
    with pytest.raises(PreconditionError):
        angle_curvatures(single_vertex_map(), {})


def test_dense_bound_grid():
    m = gen_standard(4, 3)
    rep = dense_bound_check(m, assign_regular(m))
    assert rep.r == 3 and rep.params.flat and rep.holds
    assert rep.area_bound == (0, 4 * (4 ** 3 + 1) * m.perimeter)
    with pytest.raises(PreconditionError):
        dense_bound_check(m, assign_regular(m), r=2)
    assert dense_bound_check(m, assign_regular(m), r=5).r == 5


@given(st.integers(0, len(MAPS) - 1), st.integers(0, 10_000))
def test_gauss_bonnet_any_angles(idx, seed):
    m = MAPS[idx]
    rep = angle_curvatures(m, random_angles(m, seed))
    assert rep.I_f + rep.I_v == 2


@given(st.integers(0, len(MAPS) - 1), st.integers(0, 10_000))
def test_nonpositive_angles_lemma_and_dense(idx, seed):
    m = MAPS[idx]
    a = random_angles(m, seed, nonpositive=True)
    rep = angle_curvatures(m, a)
    if any(k > 0 for k in rep.face_curvatures) or any(
            k > 0 for v, k in enumerate(rep.vertex_curvatures) if v not in m.exterior_vertices):
        with pytest.raises(PreconditionError):
            lemma_A_check(m, a)
        return
    assert lemma_A_check(m, a) >= 0
    assert dense_bound_check(m, a).holds


@pytest.mark.parametrize("pair,floor", [((3, 6), F(1, 6)), ((4, 4), F(1, 10)), ((6, 3), F(1, 21))])
def test_regular_angles_on_star_maps(pair, floor):
    pq = PQParams(*pair)
    for m in star_maps(pq, 30, 5):
        a = assign_regular(m)
        p = delta_b_params(m, a)
        assert p.b <= 11
        assert p.flat or p.delta >= floor
        assert dense_bound_check(m, a).holds


@given(st.integers(0, len(MAPS) - 1))
def test_ball_growth_bound(idx):
    assert ball_bound_check(MAPS[idx], 6) == []
