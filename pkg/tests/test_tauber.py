import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from igusa.exactcore import Polynomial, RatFun, StructuredConstant
from igusa.tauber import (
    ArchPoleData,
    DegenerateOrder,
    MissingZ0,
    MixedOrders,
    NegativeCoefficients,
    TauberError,
    UnsupportedPoleConfiguration,
    abscissa_and_order,
    arch_leading,
    cesaro_limit,
    empirical_cesaro,
    empirical_progression,
    progression_limit,
    s_leading,
    ultra_asymptotics,
)

from oracles import direct_partial_sums, naive_series


def rf(num, *factors):
    return RatFun(Polynomial(tuple(F(x) for x in num)), tuple((F(c), d, m) for c, d, m in factors))


def oracle_sums(value, n):
    return direct_partial_sums(naive_series(value.numerator.coeffs, value.factors, n))


def normalized(value, q, n, a, star, shift=0):
    sums = oracle_sums(value, n)
    return float(sums[n] - shift) * float(q) ** (-a * n) * n ** (-star)


# archimedean ---------------------------------------------------------------------


def measure_of_sublevel(density, big_b):
    # mu{x in (0, 1] : 1/x <= B}
    return integrate.quad(density, 1 / big_b, 1)[0]


def test_arch_log_growth():
    term = arch_leading(ArchPoleData(F(0), 1, F(1)))
    assert (term.exponent, term.log_degree, term.theta) == (0, 1, 1)
    for big_b in (10.0, 1e3, 1e6):
        assert term.evaluate(big_b) == pytest.approx(measure_of_sublevel(lambda x: 1 / x, big_b), rel=1e-9)


def test_arch_negative_abscissa():
    term = arch_leading(ArchPoleData(F(-1), 1, F(1), F(1)))
    assert (term.exponent, term.log_degree, term.theta, term.constant) == (-1, 0, -1, 1)
    for big_b in (2.0, 10.0, 1e4):
        assert term.evaluate(big_b) == pytest.approx(1 - 1 / big_b, abs=1e-15)
        assert term.evaluate(big_b) == pytest.approx(measure_of_sublevel(lambda x: 1.0, big_b), abs=1e-12)


def test_arch_positive_abscissa():
    term = arch_leading(ArchPoleData(F(3, 2), 1, F(3)))
    assert term.theta == 2 and term.log_degree == 0
    term = arch_leading(ArchPoleData(F(2), 3, F(8)))
    assert term.theta == 2 and term.log_degree == 2
    lead = StructuredConstant(F(2, 3), 3, 0, -1)
    assert arch_leading(ArchPoleData(F(2), 1, lead)).theta == StructuredConstant(F(1, 3), 3, 0, -1)


def test_arch_errors():
    with pytest.raises(MissingZ0):
        arch_leading(ArchPoleData(F(-1), 1, F(1)))
    with pytest.raises(DegenerateOrder):
        arch_leading(ArchPoleData(F(1), 0, F(1)))


def test_s_leading():
    assert s_leading(F(1, 2), 1, [], F(3)) == arch_leading(ArchPoleData(F(1, 2), 1, F(3)))
    term = s_leading(1, 1, [(2, 1), (3, 1)], F(6))
    assert term.theta == 3 and term.log_degree == 2
    term = s_leading(2, 0, [(2, 2)], F(4))
    assert term.theta == 2 and term.log_degree == 1
    with pytest.raises(DegenerateOrder):
        s_leading(1, 0, [], F(1))
    with pytest.raises(TauberError):
        s_leading(1, 1, [(1, 1)], F(1))


# ultrametric -----------------------------------------------------------------------


def test_double_pole_at_one():
    value = rf([1], (1, 1, 2))
    ua = ultra_asymptotics(value, 2)
    (pole,) = ua.poles
    assert pole.base == 1 and pole.q_poly.degree == 2 and pole.q_poly.coeffs[-1] == F(1, 2)
    assert all(ua.partial_sum(n) == F((n + 1) * (n + 2), 2) for n in range(60))
    assert (ua.a, ua.b) == (0, 2)


def test_poles_at_plus_minus_one():
    value = rf([1], (1, 1, 1), (-1, 1, 1))
    ua = ultra_asymptotics(value, 2)
    sums = oracle_sums(value, 100)
    assert all(ua.partial_sum(n) == sums[n] == n // 2 + 1 for n in range(101))


def test_polynomial_is_eventually_constant():
    value = rf([1, 2, 0, 3])
    ua = ultra_asymptotics(value, 5)
    assert ua.poles == () and ua.constant == 6
    assert all(ua.partial_sum(n) == 6 for n in range(3, 20))
    assert progression_limit(value, 5, 1, 0) == pytest.approx(6.0)
    assert cesaro_limit(value, 5) == pytest.approx(6.0)


def test_degree_laws():
    value = rf([1, 1], (F(1, 2), 1, 2), (1, 1, 3), (3, 1, 1))
    for pole in ultra_asymptotics(value, 3).poles:
        if pole.base == 1:
            assert pole.q_poly.degree == pole.p.degree + 1
            assert pole.q_poly.coeffs[-1] == pole.p.coeffs[-1] / (pole.p.degree + 1)
        else:
            assert pole.q_poly.degree == pole.p.degree
            assert pole.q_poly.coeffs[-1] == pole.p.coeffs[-1] / (1 - 1 / pole.base)


def test_progression_single_pole():
    value = rf([1], (2, 1, 1))
    assert abscissa_and_order(value, 2) == (1.0, 1)
    assert progression_limit(value, 2, 1, 0) == pytest.approx(2.0)
    assert normalized(value, 2, 500, 1, 0) == pytest.approx(2.0, rel=1e-9)
    assert empirical_progression(value, 2, 1, 0, 500) == pytest.approx(2.0, rel=1e-9)


def test_progression_two_classes():
    value = rf([1], (4, 2, 1))
    even, odd = progression_limit(value, 2, 2, 0), progression_limit(value, 2, 2, 1)
    assert even == pytest.approx(4 / 3) and odd == pytest.approx(2 / 3)
    assert normalized(value, 2, 500, 1, 0) == pytest.approx(even, rel=1e-2)
    assert normalized(value, 2, 499, 1, 0) == pytest.approx(odd, rel=1e-2)
    assert cesaro_limit(value, 2) == pytest.approx(empirical_cesaro(value, 2, 500), rel=2e-2)


def test_progression_zero_abscissa():
    value = rf([1], (1, 1, 1))
    assert progression_limit(value, 3, 1, 0) == pytest.approx(1.0)
    assert normalized(value, 3, 500, 0, 1) == pytest.approx(1.0, rel=1e-2)


def test_cesaro_examples():
    value = rf([1], (2, 1, 1))
    assert cesaro_limit(value, 2) == pytest.approx(empirical_cesaro(value, 2, 500), rel=2e-2)
    value = rf([1], (1, 1, 1), (F(1, 2), 1, 1))
    assert cesaro_limit(value, 2) == pytest.approx(2.0)
    assert cesaro_limit(value, 2) == pytest.approx(empirical_cesaro(value, 2, 500), rel=2e-2)


def test_negative_abscissa_uses_shifted_volume():
    value = rf([1], (F(1, 2), 1, 1))
    assert abscissa_and_order(value, 2) == (-1.0, 1)
    assert progression_limit(value, 2, 1, 0) == pytest.approx(-1.0)
    assert normalized(value, 2, 400, -1, 0, shift=2) == pytest.approx(-1.0, rel=1e-9)


def test_mixed_orders():
    value = rf([1], (1, 1, 2), (-1, 1, 1))
    with pytest.raises(MixedOrders):
        progression_limit(value, 2, 2, 0)
    limit = progression_limit(value, 2, 2, 0, allow_lower_order=True)
    assert limit == pytest.approx(0.25)
    assert normalized(value, 2, 500, 0, 2) == pytest.approx(limit, rel=1e-2)


def test_ultra_errors():
    with pytest.raises(NegativeCoefficients):
        ultra_asymptotics(rf([1, -1]), 2)
    with pytest.raises(UnsupportedPoleConfiguration):
        ultra_asymptotics(rf([1], (2, 2, 1)), 2)
    with pytest.raises(UnsupportedPoleConfiguration):
        progression_limit(rf([1], (8, 3, 1)), 2, 2, 0)


positive_bases = st.sampled_from([F(1, 3), F(1, 2), F(1), F(2), F(3)])


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.integers(0, 4), min_size=1, max_size=4).filter(any),
    st.lists(st.tuples(positive_bases, st.integers(1, 2), st.integers(1, 2)), min_size=1, max_size=3),
)
def test_closed_form_partial_sums(num, factors):
    value = rf(num, *factors)
    try:
        ua = ultra_asymptotics(value, 2)
    except UnsupportedPoleConfiguration:
        return
    sums = oracle_sums(value, 60)
    assert all(ua.partial_sum(n) == sums[n] for n in range(ua.valid_from, 61))


@settings(max_examples=20, deadline=None)
@given(st.lists(st.tuples(st.sampled_from([F(1), F(2), F(3)]), st.just(1), st.integers(1, 2)), min_size=1, max_size=3))
def test_progression_matches_direct_summation(factors):
    value = rf([1], *factors)
    a, b = abscissa_and_order(value, 3)
    star = b if a == 0 else b - 1
    limit = progression_limit(value, 3, 1, 0, allow_lower_order=True)
    # the normalised sequence has a 1/n correction; one Richardson step removes it
    extrapolated = 2 * normalized(value, 3, 500, a, star) - normalized(value, 3, 250, a, star)
    assert extrapolated == pytest.approx(limit, rel=1e-2)
    assert math.isfinite(limit) and limit > 0
