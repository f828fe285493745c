from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from igusa.arith import primes_up_to
from igusa.catalog import quadric_affine, quadric_strata
from igusa.pointcount import (
    BudgetExceeded,
    Poly,
    PointCountError,
    PolySystem,
    StratumSpec,
    all_strata_counts,
    count_points,
    count_projective,
    count_stratum,
    weil_volume,
)

from oracles import brute_count, brute_projective_count


def quadric(x, y, z):
    return x * x + y * z + 1


def test_quadric_small_fields():
    system = quadric_affine()
    assert count_points(system, 3) == 6
    assert count_points(system, 5) == 30


def test_single_variable():
    system = PolySystem(1, (Poly(1, ((1, (1,)),)),))
    assert count_points(system, 7) == 1


def test_affine_line_strata():
    spec = StratumSpec(PolySystem(1, declared_dimension=1), {"x": Poly(1, ((1, (1,)),))})
    for p in (2, 3, 7):
        assert count_stratum(spec, [], p) == p - 1
        assert count_stratum(spec, ["x"], p) == 1


def test_projective_boundary_strata():
    counts = all_strata_counts(quadric_strata(), 5)
    assert counts == {frozenset(): 30, frozenset({"D"}): 6}
    conic = PolySystem(3, (Poly(3, ((1, (2, 0, 0)), (1, (0, 1, 1)))),), projective=True)
    for p in (3, 5, 7):
        assert count_projective(conic, p) == brute_projective_count(lambda x, y, z: x * x + y * z, 3, p) == p + 1


def test_weil_volumes():
    system = quadric_affine()
    assert weil_volume(system, 5, 1) == F(6, 5)
    assert weil_volume(system, 2, 4) == F(3, 4)
    assert weil_volume(PolySystem(2, declared_dimension=2), 3, 2) == 1


def test_agrees_with_brute_force_over_composite_moduli():
    system = quadric_affine()
    for m in (4, 6, 8, 9, 12):
        assert count_points(system, m) == brute_count(quadric, 3, m)


def test_inequations_and_origin():
    system = PolySystem(2, (), (Poly(2, ((1, (1, 0)),)),))  # x != 0
    assert count_points(system, 5) == 20
    assert count_points(PolySystem(2), 5, exclude_origin=True) == 24


def test_hensel_stability_at_good_primes():
    # at odd primes the quadric is smooth mod p, so #U(Z/p^k) / p^{2k} is constant in k
    system = quadric_affine()
    for p in (3, 5, 7):
        base = weil_volume(system, p, 1)
        assert weil_volume(system, p, 2) == base
        assert weil_volume(system, p, 3) == base
    for p in (11, 13):
        assert weil_volume(system, p, 2) == weil_volume(system, p, 1)


def test_crt_multiplicativity():
    system = quadric_affine()
    assert count_points(system, 15) == count_points(system, 3) * count_points(system, 5)
    assert count_points(system, 12) == count_points(system, 4) * count_points(system, 3)


def test_strata_partition_the_space():
    spec = StratumSpec(
        PolySystem(2, declared_dimension=2),
        {"x": Poly(2, ((1, (1, 0)),)), "y": Poly(2, ((1, (0, 1)),)), "c": Poly(2, ((1, (1, 1)), (-1, (0, 0))))},
    )
    for p in (3, 5, 7):
        assert sum(all_strata_counts(spec, p).values()) == p * p


def test_budget_and_validation_errors():
    with pytest.raises(BudgetExceeded):
        count_points(PolySystem(4), 101, budget=10**6)
    with pytest.raises(PointCountError):
        Poly.from_json([{"coef": 1, "exps": [1, 2]}], 3)
    with pytest.raises(PointCountError):
        PolySystem(2, (Poly(2, ((1, (2, 0)), (1, (0, 1)))),), projective=True)
    with pytest.raises(PointCountError):
        count_stratum(StratumSpec(PolySystem(1)), ["nope"], 5)
    with pytest.raises(PointCountError):
        weil_volume(PolySystem(1), 2, 1)


def test_json_round_trip():
    system = quadric_affine()
    assert PolySystem.from_json(system.to_json()) == system


def test_thread_pool_gives_same_counts(monkeypatch):
    system = quadric_affine()
    serial = count_points(system, 31)
    monkeypatch.setenv("IGUSA_THREADS", "3")
    assert count_points(system, 31) == serial


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.tuples(st.integers(-3, 3), st.tuples(st.integers(0, 2), st.integers(0, 2))), min_size=1, max_size=4),
    st.sampled_from([2, 3, 4, 5, 6, 7]),
)
def test_random_polynomials_match_brute_force(terms, m):
    poly = Poly(2, tuple((c, e) for c, e in terms))
    expected = brute_count(lambda x, y: sum(c * x ** e[0] * y ** e[1] for c, e in terms), 2, m)
    assert count_points(PolySystem(2, (poly,)), m) == expected


def test_criterion_runtime_range():
    system = quadric_affine()
    for p in primes_up_to(31)[1:]:
        chi = 1 if p % 4 == 1 else -1
        assert count_points(system, p) == p * p + chi * p
