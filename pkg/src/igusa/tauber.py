"""Tauberian extraction of volume asymptotics from zeta-function pole data.

Archimedean case: Z(s) = int f^{-s} dmu with a pole of order b at s = a gives
V(B) = mu(f <= B) ~ Theta B^a (log B)^{b-1} with Theta a (b-1)! = C (a > 0),
V(B) ~ Theta (log B)^b with Theta b! = C (a = 0) and V(B) -> Z(0) (a < 0).

Ultrametric case: Z(s) = Phi(q^{-s}) for a rational Phi with non-negative
coefficients Z_n; V(q^n) = sum_{m <= n} Z_m. Writing Z_n = sum_j q^{a_j n} P_j(n)
(q^{a_j} = c_j) the partial sums are V(q^n) = K + sum_j q^{a_j n} Q_j(n) with
P_j(m) = Q_j(m) - q^{-a_j} Q_j(m - 1).

Normalisations used for the limits, with b* = b - 1 (a != 0) or b (a = 0):
    progression:  V(q^n) q^{-na} n^{-b*}   along n = n0 mod d
    Cesaro:       mean of the same sequence over m <= n
and for a < 0 the sequence uses V(q^n) - Phi(1) instead of V(q^n).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactcore import (
    CoefficientAsymptotic,
    Polynomial,
    RatFun,
    StructuredConstant,
    UnsplitFactor,
    coefficient_asymptotic,
    series_expand,
)
from .linalg import solve


class TauberError(ValueError):
    """Base class for validation errors in this module."""


class MissingZ0(TauberError):
    """a < 0 needs the value Z(0) as the limit of the volume."""


class DegenerateOrder(TauberError):
    """Total pole order is zero."""


class NegativeCoefficients(TauberError):
    """The series has a negative coefficient."""


class UnsupportedPoleConfiguration(TauberError):
    """Poles that the requested extraction cannot handle."""


class MixedOrders(TauberError):
    """Dominant poles on the critical circle have different orders."""


Number = Fraction | float | StructuredConstant


@dataclass(frozen=True, slots=True)
class AsymptoticTerm:
    """V(B) ~ constant + theta * B^exponent * (log B)^log_degree."""

    exponent: Fraction
    log_degree: int
    theta: Number
    constant: Number | None = None

    def to_json(self) -> dict:
        def enc(x):
            if x is None:
                return None
            if isinstance(x, StructuredConstant):
                return x.to_json()
            return str(x) if isinstance(x, Fraction) else x

        return {"exponent": str(self.exponent), "log_degree": self.log_degree, "theta": enc(self.theta), "constant": enc(self.constant)}

    def evaluate(self, big_b: float) -> float:
        theta = self.theta.numeric() if isinstance(self.theta, StructuredConstant) else float(self.theta)
        const = 0.0
        if self.constant is not None:
            const = self.constant.numeric() if isinstance(self.constant, StructuredConstant) else float(self.constant)
        return const + theta * big_b ** float(self.exponent) * math.log(big_b) ** self.log_degree


def _divide(c: Number, k: Fraction) -> Number:
    if isinstance(c, StructuredConstant):
        return c * (1 / k)
    if isinstance(c, float):
        return c / float(k)
    return Fraction(c) / k


@dataclass(frozen=True, slots=True)
class ArchPoleData:
    a: Fraction
    b: int
    leading: Number
    z0: Number | None = None


def arch_leading(data: ArchPoleData) -> AsymptoticTerm:
    a = Fraction(data.a)
    if data.b < 1:
        raise DegenerateOrder("the pole order must be at least 1")
    if a < 0:
        if data.z0 is None:
            raise MissingZ0("a < 0: supply Z(0)")
        return AsymptoticTerm(a, data.b - 1, _divide(data.leading, a * math.factorial(data.b - 1)), data.z0)
    if a == 0:
        return AsymptoticTerm(a, data.b, _divide(data.leading, Fraction(math.factorial(data.b))))
    return AsymptoticTerm(a, data.b - 1, _divide(data.leading, a * math.factorial(data.b - 1)))


def s_leading(a, b0: int, places: Sequence[tuple[int, int]], leading: Number, z0: Number | None = None) -> AsymptoticTerm:
    """Product over an archimedean part and finitely many ultrametric places.

    Each place contributes (q_j, b_j); the total log degree is governed by
    b = b0 + sum b_j. The places' log q_j must be pairwise non-Liouville for the
    statement to apply; that arithmetic condition is not checked here.
    """
    for q, bj in places:
        if q <= 1 or bj < 1:
            raise TauberError(f"bad place data ({q}, {bj})")
    b = b0 + sum(bj for _, bj in places)
    if b == 0:
        raise DegenerateOrder("total pole order is zero")
    if b0 < 0:
        raise TauberError("b0 must be non-negative")
    return arch_leading(ArchPoleData(Fraction(a), b, leading, z0))


# ---------------------------------------------------------------------------
# ultrametric extraction
# ---------------------------------------------------------------------------


def solve_partial_sum_polynomial(p: Polynomial, ratio: Fraction) -> Polynomial:
    """Q with p(m) = Q(m) - ratio * Q(m - 1); ratio = q^{-a_j}.

    For ratio != 1 the degree is preserved; for ratio == 1 it rises by one and
    the constant term is fixed to 0.
    """
    ratio = Fraction(ratio)
    deg = p.degree + (1 if ratio == 1 else 0)
    if p.is_zero():
        return Polynomial()
    basis = [Polynomial.monomial(i) for i in range(deg + 1)]
    columns = [(b - b.shift(-1) * ratio) for b in basis]
    size = deg + 1
    rows = [[columns[j][i] for j in range(size)] for i in range(size)]
    rhs = [p[i] for i in range(size)]
    if ratio == 1:
        rows.append([Fraction(int(j == 0)) for j in range(size)])
        rhs.append(Fraction(0))
    sol = solve(rows, rhs)
    if sol is None:
        raise TauberError("partial-sum recurrence has no polynomial solution")
    return Polynomial(tuple(sol))


@dataclass(frozen=True, slots=True)
class UltraPole:
    base: Fraction  # c_j = q^{a_j}
    p: Polynomial
    q_poly: Polynomial

    def real_exponent(self, q: float) -> float:
        return math.log(abs(self.base)) / math.log(q)


@dataclass(frozen=True, slots=True)
class UltraAsymptotics:
    """Z_n and V(q^n) as exact exponential polynomials."""

    q: float
    poles: tuple[UltraPole, ...]
    coefficients: CoefficientAsymptotic
    constant: Fraction
    valid_from: int
    a: float
    b: int

    def partial_sum(self, n: int) -> Fraction:
        if n < self.valid_from:
            raise ValueError(f"closed form is valid from n = {self.valid_from}")
        return self.constant + sum((pole.base**n * pole.q_poly(Fraction(n)) for pole in self.poles), Fraction(0))

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "constant": str(self.constant),
            "valid_from": self.valid_from,
            "poles": [
                {"base": str(p.base), "P": p.p.to_json(), "Q": p.q_poly.to_json(), "deg_P": p.p.degree, "deg_Q": p.q_poly.degree}
                for p in self.poles
            ],
        }


NONNEG_CHECK_TERMS = 200


def _check_nonnegative(phi: RatFun, terms: int = NONNEG_CHECK_TERMS) -> None:
    for n, c in enumerate(series_expand(phi, terms).coeffs):
        if c < 0:
            raise NegativeCoefficients(f"coefficient of u^{n} is {c}")


def ultra_asymptotics(phi: RatFun, q) -> UltraAsymptotics:
    """Exact P_j, Q_j and the constant K for Phi with rational linear poles."""
    _check_nonnegative(phi)
    try:
        split = phi.split_linear()
        coeffs = coefficient_asymptotic(split)
    except UnsplitFactor as exc:
        raise UnsupportedPoleConfiguration(str(exc)) from exc
    poles = []
    constant = sum(coeffs.poly_part.coeffs, Fraction(0))
    for base, p in coeffs.terms:
        qp = solve_partial_sum_polynomial(p, 1 / base)
        poles.append(UltraPole(base, p, qp))
        constant -= qp(Fraction(-1)) / base
    q = float(q)
    if poles:
        a = max(pole.real_exponent(q) for pole in poles)
        b = max(pole.p.degree + 1 for pole in poles if math.isclose(pole.real_exponent(q), a))
    else:
        a, b = float("-inf"), 0
    return UltraAsymptotics(q, tuple(poles), coeffs, constant, max(coeffs.poly_part.degree, 0), a, b)


# numerical pole data ---------------------------------------------------------


@dataclass(frozen=True, slots=True)
class NumericPole:
    point: complex
    order: int
    laurent: complex  # lim (1 - u/point)^order Phi(u)


def _numerator_order(num: Polynomial, u0: complex, tol: float = 1e-9) -> int:
    poly = num
    k = 0
    while not poly.is_zero():
        scale = sum(abs(float(c)) * abs(u0) ** i for i, c in enumerate(poly.coeffs)) or 1.0
        if abs(poly(u0)) > tol * scale:
            return k
        poly = poly.derivative()
        k += 1
    return k


def numeric_poles(phi: RatFun) -> list[NumericPole]:
    """All poles with their orders and leading Laurent coefficients (floating point)."""
    roots: list[list] = []  # [point, total multiplicity, [(c, d, m)] vanishing]
    for c, d, m in phi.factors:
        radius = abs(float(c)) ** (-1.0 / d)
        phase0 = 0.0 if c > 0 else math.pi / d
        for j in range(d):
            u = radius * cmath.exp(1j * (phase0 + 2 * math.pi * j / d))
            for entry in roots:
                if abs(entry[0] - u) <= 1e-9 * max(1.0, abs(u)):
                    entry[1] += m
                    entry[2].append((c, d, m))
                    break
            else:
                roots.append([u, m, [(c, d, m)]])
    out = []
    for u0, mult, vanishing in roots:
        k = _numerator_order(phi.numerator, u0)
        order = mult - k
        if order <= 0:
            continue
        deriv = phi.numerator
        for _ in range(k):
            deriv = deriv.derivative()
        num_lead = deriv(u0) * (-u0) ** k / math.factorial(k)
        den = 1 + 0j
        for c, d, m in phi.factors:
            if (c, d, m) in vanishing:
                den *= d**m
            else:
                den *= (1 - float(c) * u0**d) ** m
        out.append(NumericPole(u0, order, num_lead / den))
    return sorted(out, key=lambda p: (abs(p.point), cmath.phase(p.point) % (2 * math.pi)))


def _dominant(phi: RatFun) -> tuple[list[NumericPole], float]:
    poles = numeric_poles(phi)
    if not poles:
        return [], float("inf")
    radius = abs(poles[0].point)
    return [p for p in poles if abs(abs(p.point) - radius) <= 1e-9 * radius], radius


def _star_degree(a: float, b: int) -> int:
    return b if abs(a) < 1e-12 else b - 1


def progression_limit(phi: RatFun, q, d: int, n0: int, allow_lower_order: bool = False) -> float:
    """lim V(q^n) q^{-na} n^{-b*} along n = n0 (mod d), by the pole formula

        (log q)^b / (b - 1)! * sum_j e^{2 i pi (j - 1) n0 / d} c_j / (1 - q^{-a_j})

    with c_j = lim (s - a_j)^b Z(s) at a_j = a + 2 i pi (j - 1)/(d log q). When
    a = 0 only the pole at u = 1 survives and the limit is c_1 (log q)^b / b!.
    """
    _check_nonnegative(phi)
    dominant, radius = _dominant(phi)
    if not dominant:
        return float(phi(1.0))
    logq = math.log(float(q))
    a = -math.log(radius) / logq
    b = max(p.order for p in dominant)
    if not allow_lower_order and any(p.order != b for p in dominant):
        raise MixedOrders("dominant poles have different orders: " + ", ".join(str(p.order) for p in dominant))
    total = 0j
    for pole in dominant:
        if pole.order < b:
            continue
        turn = (radius / pole.point) ** d  # q^{a_j d} / q^{a d}
        if abs(turn - 1) > 1e-7:
            raise UnsupportedPoleConfiguration(f"pole {pole.point} is not at a {d}-th root of unity times q^(-a)")
        phase = cmath.phase(radius / pole.point)
        j = round(phase * d / (2 * math.pi)) % d
        zeta_n0 = cmath.exp(2j * math.pi * j * n0 / d)
        c_j_logq = pole.laurent  # (log q)^b c_j
        if abs(a) < 1e-12:
            if j == 0:
                total += c_j_logq / math.factorial(b)
            continue
        total += zeta_n0 * c_j_logq / (1 - pole.point) / math.factorial(b - 1)
    return total.real


def cesaro_limit(phi: RatFun, q) -> float:
    """Cesaro mean limit of the normalised volume sequence (see module docstring).

    Equal to c_1 (log q)^b / ((b - 1)! (1 - q^{-a})) for a != 0, c_1 (log q)^b / b!
    for a = 0, and Phi(1) when Phi is a polynomial.
    """
    _check_nonnegative(phi)
    dominant, radius = _dominant(phi)
    if not dominant:
        return float(phi(1.0))
    real_pole = next((p for p in dominant if abs(p.point.imag) < 1e-12 and p.point.real > 0), None)
    if real_pole is None:
        raise UnsupportedPoleConfiguration("no pole on the positive real axis")
    b = real_pole.order
    lead = real_pole.laurent.real
    if abs(math.log(radius)) < 1e-12:
        return lead / math.factorial(b)
    return lead / (math.factorial(b - 1) * (1 - radius))


def abscissa_and_order(phi: RatFun, q) -> tuple[float, int]:
    dominant, radius = _dominant(phi)
    if not dominant:
        return float("-inf"), 0
    return -math.log(radius) / math.log(float(q)) + 0.0, max(p.order for p in dominant)


# direct summation oracles ----------------------------------------------------


def partial_sums(phi: RatFun, n: int) -> tuple[Fraction, ...]:
    return series_expand(phi, n).partial_sums()


def normalized_sequence(phi: RatFun, q, n: int) -> np.ndarray:
    """x_m = V(q^m) q^{-am} m^{-b*} (V - Phi(1) when a < 0) for m = 1..n, from exact sums."""
    a, b = abscissa_and_order(phi, q)
    sums = partial_sums(phi, n)
    if b == 0:
        return np.array([float(s) for s in sums[1:]])
    star = _star_degree(a, b)
    shift = phi(Fraction(1)) if a < 0 else Fraction(0)
    logq = math.log(float(q))
    out = np.empty(n)
    for m in range(1, n + 1):
        diff = sums[m] - shift
        # q^{-am} can overflow as a float: work with logarithms of |diff|
        if diff == 0:
            out[m - 1] = 0.0
            continue
        log_abs = _log_fraction(abs(diff)) - a * m * logq - star * math.log(m)
        out[m - 1] = math.copysign(math.exp(log_abs), diff)
    return out


def _log_fraction(x: Fraction) -> float:
    return _log_int(x.numerator) - _log_int(x.denominator)


def _log_int(n: int) -> float:
    bits = n.bit_length()
    if bits < 1000:
        return math.log(n)
    shift = bits - 60
    return math.log(n >> shift) + shift * math.log(2)


def empirical_progression(phi: RatFun, q, d: int, n0: int, n: int) -> float:
    """Normalised V at the largest m <= n with m = n0 (mod d)."""
    seq = normalized_sequence(phi, q, n)
    m = n - ((n - n0) % d)
    return float(seq[m - 1])


def empirical_cesaro(phi: RatFun, q, n: int) -> float:
    seq = normalized_sequence(phi, q, n)
    return float(seq.mean())
