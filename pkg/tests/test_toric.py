import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from igusa.catalog import fan_p1, fan_p1xp1_swap, fan_p2
from igusa.clemens import poset_isomorphic
from igusa.toric import (
    Fan,
    FanValidationFailure,
    analytic_face_dimensions,
    fans_equivalent,
    induced_fan,
    invariant_cones,
    invariant_sublattice,
    make_fan,
    toric_clemens,
)

QUADRANTS = [[(1, 0), (0, 1)], [(0, 1), (-1, 0)], [(-1, 0), (0, -1)], [(0, -1), (1, 0)]]


def test_invariant_sublattices():
    assert invariant_sublattice(make_fan(2, QUADRANTS)) == [(1, 0), (0, 1)]
    assert invariant_sublattice(fan_p1xp1_swap()) == [(1, 1)]
    assert invariant_sublattice(make_fan(2, QUADRANTS, [((-1, 0), (0, -1))])) == []
    cube = [[(1, 0, 0), (0, 1, 0), (0, 0, 1)], [(-1, 0, 0), (0, -1, 0), (0, 0, -1)]]
    cyclic = ((0, 0, 1), (1, 0, 0), (0, 1, 0))
    assert invariant_sublattice(make_fan(3, cube, [cyclic])) == [(1, 1, 1)]


def test_induced_fan_of_swap_is_p1():
    induced, basis = induced_fan(fan_p1xp1_swap())
    assert basis == [(1, 1)]
    assert induced.rank == 1 and sorted(induced.rays) == [(-1,), (1,)]
    assert fans_equivalent(induced, fan_p1())


def test_induced_fan_of_split_action_is_the_fan():
    for fan in (fan_p2(), make_fan(2, QUADRANTS)):
        induced, _ = induced_fan(fan)
        assert fans_equivalent(induced, fan)


def test_anisotropic_action():
    fan = make_fan(2, QUADRANTS, [((-1, 0), (0, -1))])
    induced, basis = induced_fan(fan)
    assert basis == [] and induced.rank == 0
    assert [c for c in invariant_cones(fan) if c] == []
    _, analytic = toric_clemens(fan)
    assert analytic.dimension == -1


def test_clemens_of_swap():
    geometric, analytic = toric_clemens(fan_p1xp1_swap())
    assert geometric.dimension == 1 and len(geometric.vertices()) == 4
    assert len(analytic.faces) == 2 and all(len(f.components) == 2 for f in analytic.faces)
    assert sorted(analytic_face_dimensions(fan_p1xp1_swap()).values()) == [0, 0]
    _, induced_analytic = toric_clemens(induced_fan(fan_p1xp1_swap())[0])
    assert poset_isomorphic(analytic, induced_analytic)


def test_clemens_of_p2():
    geometric, analytic = toric_clemens(fan_p2())
    assert geometric.dimension == 1
    assert len(geometric.vertices()) == 3
    assert sum(1 for f in geometric.faces if len(f.components) == 2) == 3
    assert analytic.keys() == geometric.keys()
    assert set(analytic_face_dimensions(fan_p2()).values()) == {0, 1}


def test_smoothness():
    assert fan_p2().is_smooth()
    assert not make_fan(2, [[(1, 0), (1, 2)]]).is_smooth()


def test_fan_validation():
    with pytest.raises(FanValidationFailure):
        make_fan(2, [[(1, 0), (0, 1)], [(1, 1), (0, 1)]])
    with pytest.raises(FanValidationFailure):
        make_fan(2, [[(1, 0), (1, 2)], [(1, 1), (0, 1)]])
    with pytest.raises(FanValidationFailure):
        make_fan(2, [[(2, 0)]])
    with pytest.raises(FanValidationFailure):
        make_fan(2, [[(1, 0), (-1, 0)]])
    with pytest.raises(FanValidationFailure):
        make_fan(2, [[(1, 0)]], [((0, 1), (1, 0))])
    with pytest.raises(FanValidationFailure):
        make_fan(2, QUADRANTS, [((2, 0), (0, 1))])
    with pytest.raises(FanValidationFailure):
        make_fan(2, [[(1, 0, 0)]])


def test_adjacent_cones_are_accepted():
    fan = make_fan(2, [[(1, 0), (1, 1)], [(1, 1), (0, 1)]])
    assert len(fan.maximal_cones()) == 2


def test_inequivalent_fans():
    assert not fans_equivalent(fan_p2(), make_fan(2, QUADRANTS))
    assert not fans_equivalent(fan_p1(), fan_p2())


def test_json_round_trip():
    fan = fan_p1xp1_swap()
    assert Fan.from_json(fan.to_json()) == fan


unimodular = st.sampled_from([((1, 0), (0, 1)), ((1, 1), (0, 1)), ((2, 1), (1, 1)), ((0, 1), (-1, 0)), ((1, -2), (0, 1)), ((3, 2), (1, 1))])


@settings(max_examples=20, deadline=None)
@given(unimodular, unimodular)
def test_unimodular_images_are_equivalent(m1, m2):
    def apply(m, r):
        return (m[0][0] * r[0] + m[0][1] * r[1], m[1][0] * r[0] + m[1][1] * r[1])

    for base in (fan_p2(), make_fan(2, QUADRANTS)):
        cones = [[apply(m2, apply(m1, r)) for r in c] for c in base.maximal_cones()]
        image = make_fan(2, cones)
        assert fans_equivalent(base, image) and fans_equivalent(image, base)
        assert len(toric_clemens(image)[0].faces) == len(toric_clemens(base)[0].faces)
