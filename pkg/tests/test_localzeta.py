import math
from fractions import Fraction as F

import pytest
from scipy.special import gamma

from igusa.exactcore import RatFun, series_expand
from igusa.localzeta import (
    COMPLEXES,
    REALS,
    LocalField,
    LocalFieldError,
    QuadratureFailure,
    c_constant,
    integral_over_R,
    mellin_numeric,
    mellin_residue_check,
    residue_measure_norm,
    zeta_local,
)

from oracles import annulus_sums


def test_c_constants():
    assert c_constant(REALS).numeric() == 2
    assert c_constant(COMPLEXES).numeric() == pytest.approx(math.pi, abs=1e-15)
    c3 = c_constant(LocalField.padic(3))
    assert (c3.coeff, c3.q, c3.logq_exp) == (F(2, 3), 3, -1)
    assert c_constant(LocalField("real", mu_interval=1)).numeric() == 1


def test_padic_zeta_values():
    assert zeta_local(LocalField.padic(2))(F(1, 2)) == 1
    z5 = zeta_local(LocalField.padic(5))
    b, lead = z5.laurent_leading(1)
    # residue in s at s = 0 is lead / log q
    assert b == 1 and lead == F(4, 5)


def test_padic_zeta_series_is_annulus_measures():
    # coefficient of T^n = q^{-ns} is the integral of |x|^{-1} over |x| = q^{-n}
    for q in (2, 3, 5):
        series = series_expand(zeta_local(LocalField.padic(q)), 12).coeffs
        assert list(series) == annulus_sums(q, -1, 12)


def test_archimedean_zeta():
    assert zeta_local(REALS)(2) == pytest.approx(1.0)
    assert zeta_local(COMPLEXES)(1) == pytest.approx(math.pi)


def test_residue_measure_norm():
    assert residue_measure_norm([REALS]).numeric() == 2
    both = residue_measure_norm([LocalField.padic(3), LocalField.padic(3)])
    assert (both.coeff, both.logq_exp) == (F(4, 9), -2)
    assert residue_measure_norm([COMPLEXES, REALS]).numeric() == pytest.approx(2 * math.pi)


def test_field_validation():
    with pytest.raises(LocalFieldError):
        LocalField("adelic")
    with pytest.raises(LocalFieldError):
        LocalField.padic(6)
    with pytest.raises(LocalFieldError):
        LocalField.padic(5, mu0=0)
    with pytest.raises(LocalFieldError):
        mellin_numeric(lambda x: 1.0, -1, (-1, 1))


def test_mellin_examples():
    indicator = lambda x: 1.0 if abs(x) <= 1 else 0.0
    assert mellin_numeric(indicator, 1, (-1, 1)).real == pytest.approx(2.0, abs=1e-10)
    gauss = lambda x: math.exp(-x * x)
    assert mellin_numeric(gauss, 1, (-8, 8)).real == pytest.approx(math.sqrt(math.pi), abs=1e-6)
    assert mellin_residue_check(gauss, (-8, 8)) == pytest.approx(2.0, abs=1e-3)


def test_mellin_complex_argument_matches_gamma():
    gauss = lambda x: math.exp(-x * x)
    s = 1.5 + 2.0j
    assert mellin_numeric(gauss, s, (-8, 8)) == pytest.approx(gamma(s / 2), abs=1e-8)


def test_integrals_over_R():
    assert integral_over_R(lambda z: 1 / (1 + z * z)) == pytest.approx(math.pi, abs=1e-9)
    assert integral_over_R(lambda z: math.exp(-z * z)) == pytest.approx(math.sqrt(math.pi), abs=1e-9)
    assert integral_over_R(lambda z: 1.0 if 0 <= z <= 1 else 0.0, tol=1e-6) == pytest.approx(1.0, abs=1e-6)


def test_quadrature_failure_reported():
    with pytest.raises(QuadratureFailure):
        integral_over_R(lambda z: 1 / abs(z) if z else 0.0)


def test_zeta_local_is_a_ratfun():
    assert zeta_local(LocalField.padic(7, mu0=F(1, 2))) == RatFun.geometric(1, 1, 1, F(3, 7))
