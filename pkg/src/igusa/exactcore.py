"""Exact rational functions in T = q^{-s}, power series, partial fractions and
structured constants c * q^e * (log q)^k * pi^m.

A :class:`RatFun` keeps its denominator factored as prod (1 - c T^d)^mult and is
never cancelled implicitly, so pole orders can be read off honestly (numerator
vanishing is accounted for by :meth:`RatFun.pole_order`).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .arith import binomial_polynomial, lcm, minimal_root_degree, rational_power, rational_root


class ExactCoreError(ValueError):
    """Base class for validation errors raised by this module."""


class RepeatedBaseMismatch(ExactCoreError):
    """Two denominator factors share a base but were not merged."""


class UnsplitFactor(ExactCoreError):
    """A factor (1 - c T^d) with d > 1 reached an operation that needs d = 1."""


class BaseMismatch(ExactCoreError):
    """Structured constants with different q-bases were combined."""


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Polynomial:
    """Dense polynomial with rational coefficients, ascending powers."""

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        cs = [_frac(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def constant(cls, c) -> Polynomial:
        return cls((_frac(c),))

    @classmethod
    def monomial(cls, degree: int, c=1) -> Polynomial:
        return cls((Fraction(0),) * degree + (_frac(c),))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __add__(self, other: Polynomial) -> Polynomial:
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(tuple(self[i] + other[i] for i in range(n)))

    def __neg__(self) -> Polynomial:
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            c = _frac(other)
            return Polynomial(tuple(c * x for x in self.coeffs))
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
        return Polynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        out = Polynomial.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quot = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.coeffs[-1]
        for i in range(len(quot) - 1, -1, -1):
            c = rem[i + other.degree] / lead
            quot[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return Polynomial(tuple(quot)), Polynomial(tuple(rem))

    def __call__(self, x):
        exact = isinstance(x, (int, Fraction))
        if exact:
            x = Fraction(x)
        acc = Fraction(0) if exact else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + (c if exact else float(c))
        return acc

    def derivative(self) -> Polynomial:
        return Polynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def compose_power(self, d: int) -> Polynomial:
        """p(T^d)."""
        out = [Fraction(0)] * (d * self.degree + 1 if self.coeffs else 0)
        for i, c in enumerate(self.coeffs):
            out[d * i] = c
        return Polynomial(tuple(out))

    def shift(self, h) -> Polynomial:
        """p(x + h)."""
        h = _frac(h)
        out = Polynomial()
        step = Polynomial((h, Fraction(1)))
        for c in reversed(self.coeffs):
            out = out * step + Polynomial.constant(c)
        return out

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]


def _binomial_factor(c: Fraction, d: int) -> Polynomial:
    """1 - c T^d."""
    return Polynomial((Fraction(1),) + (Fraction(0),) * (d - 1) + (-c,))


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------

FactorKey = tuple[Fraction, int]


def _merge_factors(factors: Iterable[Sequence], strict: bool = False) -> tuple[tuple[Fraction, int, int], ...]:
    merged: dict[FactorKey, int] = {}
    for entry in factors:
        c, d, mult = _frac(entry[0]), int(entry[1]), int(entry[2])
        if d < 1 or mult < 0:
            raise ExactCoreError(f"bad denominator factor {entry!r}")
        if c == 0 or mult == 0:
            continue
        if strict and (c, d) in merged:
            raise RepeatedBaseMismatch(f"factor (1 - {c} T^{d}) listed twice")
        merged[(c, d)] = merged.get((c, d), 0) + mult
    return tuple(sorted((c, d, m) for (c, d), m in merged.items()))


@dataclass(frozen=True, slots=True)
class RatFun:
    """numerator(T) / prod (1 - c T^d)^mult."""

    numerator: Polynomial
    factors: tuple[tuple[Fraction, int, int], ...] = ()

    def __post_init__(self) -> None:
        num = self.numerator if isinstance(self.numerator, Polynomial) else Polynomial(tuple(self.numerator))
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "factors", _merge_factors(self.factors))

    # -- construction -----------------------------------------------------
    @classmethod
    def polynomial(cls, coeffs: Sequence) -> RatFun:
        return cls(Polynomial(tuple(coeffs)))

    @classmethod
    def geometric(cls, c, d: int = 1, mult: int = 1, scale=1) -> RatFun:
        """scale / (1 - c T^d)^mult."""
        return cls(Polynomial.constant(scale), ((c, d, mult),))

    @classmethod
    def from_json(cls, obj: Mapping) -> RatFun:
        num = Polynomial(tuple(Fraction(str(c)) for c in obj.get("num", [])))
        den = [(Fraction(str(c)), int(d), int(m)) for c, d, m in obj.get("den", [])]
        _merge_factors(den, strict=True)
        return cls(num, tuple(den))

    def to_json(self) -> dict:
        return {"num": self.numerator.to_json(), "den": [[str(c), d, m] for c, d, m in self.factors]}

    # -- algebra ------------------------------------------------------------
    def denominator(self) -> Polynomial:
        out = Polynomial.constant(1)
        for c, d, m in self.factors:
            out = out * _binomial_factor(c, d) ** m
        return out

    def _factor_map(self) -> dict[FactorKey, int]:
        return {(c, d): m for c, d, m in self.factors}

    def __add__(self, other) -> RatFun:
        if not isinstance(other, RatFun):
            other = RatFun(Polynomial.constant(other))
        mine, theirs = self._factor_map(), other._factor_map()
        common = {k: max(mine.get(k, 0), theirs.get(k, 0)) for k in set(mine) | set(theirs)}

        def lift(rf_map: dict[FactorKey, int], num: Polynomial) -> Polynomial:
            for (c, d), m in common.items():
                extra = m - rf_map.get((c, d), 0)
                if extra:
                    num = num * _binomial_factor(c, d) ** extra
            return num

        num = lift(mine, self.numerator) + lift(theirs, other.numerator)
        return RatFun(num, tuple((c, d, m) for (c, d), m in common.items()))

    __radd__ = __add__

    def __neg__(self) -> RatFun:
        return RatFun(-self.numerator, self.factors)

    def __sub__(self, other) -> RatFun:
        return self + (-other if isinstance(other, RatFun) else RatFun(Polynomial.constant(-_frac(other))))

    def __mul__(self, other) -> RatFun:
        if isinstance(other, RatFun):
            return RatFun(self.numerator * other.numerator, self.factors + other.factors)
        if isinstance(other, Polynomial):
            return RatFun(self.numerator * other, self.factors)
        return RatFun(self.numerator * _frac(other), self.factors)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        """Equality as rational functions (cross-multiplied)."""
        if not isinstance(other, RatFun):
            return NotImplemented
        return self.numerator * other.denominator() == other.numerator * self.denominator()

    def __hash__(self) -> int:  # equality is semantic, so hash coarsely
        return hash(len(self.factors))

    # -- evaluation ---------------------------------------------------------
    def __call__(self, t):
        if isinstance(t, (int, Fraction)):
            t = Fraction(t)
            den = Fraction(1)
            for c, d, m in self.factors:
                den *= (1 - c * t**d) ** m
            if den == 0:
                raise ZeroDivisionError(f"pole at T = {t}")
            return self.numerator(t) / den
        real_input = isinstance(t, float)
        t = complex(t)
        den = 1 + 0j
        for c, d, m in self.factors:
            den *= (1 - float(c) * t**d) ** m
        val = self.numerator(t) / den
        return val.real if real_input else val

    def at_s(self, s, q) -> complex:
        """Numerical value at T = q^{-s} for complex s."""
        return self(cmath.exp(-complex(s) * math.log(q)))

    # -- pole analysis ------------------------------------------------------
    def pole_order(self, radicand, k: int = 1) -> int:
        """Order of the pole at the positive real point T0 = radicand**(1/k).

        The numerator's vanishing at T0 is divided out exactly using the
        minimal polynomial T^j - T0^j of T0 over Q.
        """
        radicand = _frac(radicand)
        if radicand <= 0:
            raise ExactCoreError("T0 must be positive")
        order = 0
        for c, d, m in self.factors:
            # c * T0^d == 1  <=>  c^k * radicand^d == 1 (c must be positive)
            if c > 0 and c**k * radicand**d == 1:
                order += m
        j = minimal_root_degree(radicand, k)
        value = rational_power(radicand, Fraction(j, k))
        minimal = Polynomial((-value,) + (Fraction(0),) * (j - 1) + (Fraction(1),))
        num = self.numerator
        while order > 0 and not num.is_zero():
            quot, rem = num.divmod(minimal)
            if not rem.is_zero():
                break
            num = quot
            order -= 1
        return order

    def laurent_leading(self, t0) -> tuple[int, Fraction]:
        """(b, L) with (1 - T/T0)^b R(T) -> L as T -> T0, T0 a non-zero rational.

        Each vanishing factor contributes lim (1 - c T^d)/(1 - T/T0) = d.
        """
        t0 = _frac(t0)
        if t0 == 0:
            raise ExactCoreError("T0 must be non-zero")
        order, den = 0, Fraction(1)
        for c, d, m in self.factors:
            value = 1 - c * t0**d
            if value == 0:
                order += m
                den *= Fraction(d) ** m
            else:
                den *= value**m
        num = self.numerator
        linear = Polynomial((Fraction(1), -1 / t0))
        while order > 0 and not num.is_zero():
            quot, rem = num.divmod(linear)
            if not rem.is_zero():
                break
            num, order = quot, order - 1
        if num.is_zero():
            return 0, Fraction(0)
        return order, num(t0) / den

    def split_linear(self) -> RatFun:
        """Rewrite factors with d > 1 as products of d = 1 factors when that is
        possible over Q (d = 2 with c a rational square); otherwise raise."""
        out: list[tuple[Fraction, int, int]] = []
        for c, d, m in self.factors:
            if d == 1:
                out.append((c, 1, m))
                continue
            root = rational_root(abs(c), 2) if d == 2 and c > 0 else None
            if root is None:
                raise UnsplitFactor(f"(1 - {c} T^{d}) does not split into rational linear factors")
            out.extend([(root, 1, m), (-root, 1, m)])
        return RatFun(self.numerator, tuple(out))


# ---------------------------------------------------------------------------
# Power series
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class PowerSeries:
    """Truncated power series: coeffs[0..N]."""

    coeffs: tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __mul__(self, other: PowerSeries) -> PowerSeries:
        n = min(self.order, other.order)
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs[: n + 1]):
            if a:
                for j in range(n + 1 - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] += a * b
        return PowerSeries(tuple(out))

    def partial_sums(self) -> tuple[Fraction, ...]:
        acc, out = Fraction(0), []
        for c in self.coeffs:
            acc += c
            out.append(acc)
        return tuple(out)


def geometric_series(c, d: int, mult: int, n: int) -> list[Fraction]:
    """Coefficients of (1 - c T^d)^{-mult} up to T^n."""
    c = _frac(c)
    out = [Fraction(0)] * (n + 1)
    binom = binomial_polynomial(mult - 1)
    power = Fraction(1)
    for k in range(n // d + 1):
        out[d * k] = Polynomial(binom)(Fraction(k)) * power
        power *= c
    return out


def _truncated_product(a: list[Fraction], b: list[Fraction], n: int) -> list[Fraction]:
    out = [Fraction(0)] * (n + 1)
    nz_b = [(j, y) for j, y in enumerate(b[: n + 1]) if y]
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j, y in nz_b:
                if i + j > n:
                    break
                out[i + j] += x * y
    return out


def series_expand(rf: RatFun, n: int) -> PowerSeries:
    """First n+1 Taylor coefficients of rf at T = 0."""
    coeffs = [rf.numerator[i] for i in range(n + 1)]
    for c, d, m in rf.factors:
        coeffs = _truncated_product(coeffs, geometric_series(c, d, m, n), n)
    return PowerSeries(tuple(coeffs))


# ---------------------------------------------------------------------------
# Partial fractions and coefficient asymptotics
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class PartialFractions:
    """poly_part + sum over terms (c, i, e) of e / (1 - c T)^i."""

    poly_part: Polynomial
    terms: tuple[tuple[Fraction, int, Fraction], ...]

    def recombine(self) -> RatFun:
        out = RatFun(self.poly_part)
        for c, i, e in self.terms:
            out = out + RatFun.geometric(c, 1, i, e)
        return out


def _series_inverse(p: Polynomial, n: int) -> list[Fraction]:
    """Coefficients of 1/p(w) up to w^n, p(0) != 0."""
    inv = [Fraction(0)] * (n + 1)
    inv[0] = 1 / p[0]
    for k in range(1, n + 1):
        inv[k] = -sum(p[j] * inv[k - j] for j in range(1, min(k, p.degree) + 1)) / p[0]
    return inv


def partial_fractions(rf: RatFun) -> PartialFractions:
    """Exact partial fraction decomposition; every factor must have d = 1."""
    if any(d != 1 for _, d, _ in rf.factors):
        raise UnsplitFactor("partial_fractions needs linear factors; use quasi_polynomial for d > 1")
    terms: list[tuple[Fraction, int, Fraction]] = []
    for cj, _, mj in rf.factors:
        # Expand rf * (1 - cj T)^mj in w = 1 - cj T, i.e. T = (1 - w)/cj.
        t_of_w = Polynomial((1 / cj, -1 / cj))
        num_w = Polynomial()
        for coeff in reversed(rf.numerator.coeffs):
            num_w = num_w * t_of_w + Polynomial.constant(coeff)
        series = [num_w[i] for i in range(mj)]
        for ck, _, mk in rf.factors:
            if ck == cj:
                continue
            ratio = ck / cj
            other = Polynomial((1 - ratio, ratio)) ** mk
            series = _truncated_product(series, _series_inverse(other, mj - 1), mj - 1)
        for i in range(1, mj + 1):
            e = series[mj - i]
            if e:
                terms.append((cj, i, e))
    poly = _polynomial_remainder_part(rf, terms)
    return PartialFractions(poly, tuple(terms))


def _polynomial_remainder_part(rf: RatFun, terms) -> Polynomial:
    den = rf.denominator()
    rest = rf.numerator
    fmap = rf._factor_map()
    for c, i, e in terms:
        cof = Polynomial.constant(e)
        for (ck, dk), mk in fmap.items():
            power = mk - i if ck == c else mk
            cof = cof * _binomial_factor(ck, dk) ** power
        rest = rest - cof
    quot, rem = rest.divmod(den)
    if not rem.is_zero():
        raise ExactCoreError("partial fraction recombination failed")  # internal consistency check
    return quot


@dataclass(frozen=True, slots=True)
class CoefficientAsymptotic:
    """Z_n = poly_part[n] + sum_j c_j^n P_j(n), valid for every n >= 0."""

    terms: tuple[tuple[Fraction, Polynomial], ...]
    poly_part: Polynomial

    @property
    def exceptional(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.poly_part.coeffs) if c)

    def coefficient(self, n: int) -> Fraction:
        n_frac = Fraction(n)
        return self.poly_part[n] + sum((c**n * p(n_frac) for c, p in self.terms), Fraction(0))

    def pole_terms(self) -> dict[Fraction, Polynomial]:
        return dict(self.terms)


def coefficient_asymptotic(rf: RatFun) -> CoefficientAsymptotic:
    pf = partial_fractions(rf)
    grouped: dict[Fraction, Polynomial] = {}
    for c, i, e in pf.terms:
        # [T^n] 1/(1 - cT)^i = c^n * C(n + i - 1, i - 1)
        grouped[c] = grouped.get(c, Polynomial()) + Polynomial(binomial_polynomial(i - 1)) * e
    terms = tuple(sorted(((c, p) for c, p in grouped.items() if not p.is_zero()), key=lambda t: (-abs(t[0]), -t[0])))
    return CoefficientAsymptotic(terms, pf.poly_part)


@dataclass(frozen=True, slots=True)
class QuasiPolynomial:
    """Z_{r + period*k} = residues[r].coefficient(k) for 0 <= r < period."""

    period: int
    residues: tuple[CoefficientAsymptotic, ...]

    def coefficient(self, n: int) -> Fraction:
        k, r = divmod(n, self.period)
        return self.residues[r].coefficient(k)


def quasi_polynomial(rf: RatFun) -> QuasiPolynomial:
    """Exact coefficient formula for arbitrary factors (1 - c T^d), staying in Q.

    All factors are lifted to a common exponent D (1 - c T^d divides
    1 - c^{D/d} T^{D}); the series is then split into D residue classes, each of
    which is a rational function of w = T^D with linear denominator factors.
    """
    period = lcm(*(d for _, d, _ in rf.factors)) if rf.factors else 1
    num = rf.numerator
    lifted: list[tuple[Fraction, int, int]] = []
    for c, d, m in rf.factors:
        step = period // d
        cofactor = Polynomial(tuple(_cofactor_coeffs(c, d, step)))
        num = num * cofactor**m
        lifted.append((c**step, 1, m))
    residues = []
    for r in range(period):
        part = Polynomial(tuple(num[r + period * k] for k in range((num.degree - r) // period + 1))) if num.degree >= r else Polynomial()
        residues.append(coefficient_asymptotic(RatFun(part, tuple(lifted))))
    return QuasiPolynomial(period, tuple(residues))


def _cofactor_coeffs(c: Fraction, d: int, step: int) -> list[Fraction]:
    """Coefficients of sum_{j < step} c^j T^{dj} = (1 - c^step T^{d step})/(1 - c T^d)."""
    out = [Fraction(0)] * (d * (step - 1) + 1)
    for j in range(step):
        out[d * j] = c**j
    return out


# ---------------------------------------------------------------------------
# Structured constants
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class StructuredConstant:
    """coeff * q^q_exp * (log q)^logq_exp * pi^pi_exp.

    Integer parts of q_exp are folded into coeff, and a constant with no q-part
    is stored with q = 1 so it multiplies against any base.
    """

    coeff: Fraction
    q: Fraction = Fraction(1)
    q_exp: Fraction = Fraction(0)
    logq_exp: int = 0
    pi_exp: int = 0

    def __post_init__(self) -> None:
        coeff, q, q_exp = _frac(self.coeff), _frac(self.q), _frac(self.q_exp)
        if q <= 0:
            raise ExactCoreError("q must be positive")
        whole = math.floor(q_exp)
        if whole:
            coeff *= q**whole
            q_exp -= whole
        if q_exp == 0 and self.logq_exp == 0:
            q = Fraction(1)
        if coeff == 0:
            q, q_exp = Fraction(1), Fraction(0)
            object.__setattr__(self, "logq_exp", 0)
            object.__setattr__(self, "pi_exp", 0)
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "q_exp", q_exp)

    @property
    def has_q_part(self) -> bool:
        return self.q_exp != 0 or self.logq_exp != 0

    def _base_with(self, other: StructuredConstant) -> Fraction:
        if self.has_q_part and other.has_q_part and self.q != other.q:
            raise BaseMismatch(f"bases {self.q} and {other.q} differ")
        return self.q if self.has_q_part else other.q

    def __mul__(self, other) -> StructuredConstant:
        if not isinstance(other, StructuredConstant):
            return StructuredConstant(self.coeff * _frac(other), self.q, self.q_exp, self.logq_exp, self.pi_exp)
        q = self._base_with(other)
        return StructuredConstant(
            self.coeff * other.coeff,
            q,
            self.q_exp + other.q_exp,
            self.logq_exp + other.logq_exp,
            self.pi_exp + other.pi_exp,
        )

    __rmul__ = __mul__

    def inverse(self) -> StructuredConstant:
        if self.coeff == 0:
            raise ZeroDivisionError("inverse of zero constant")
        return StructuredConstant(1 / self.coeff, self.q, -self.q_exp, -self.logq_exp, -self.pi_exp)

    def __truediv__(self, other) -> StructuredConstant:
        if not isinstance(other, StructuredConstant):
            return self * (1 / _frac(other))
        return self * other.inverse()

    def __pow__(self, k: int) -> StructuredConstant:
        return StructuredConstant(self.coeff**k, self.q, self.q_exp * k, self.logq_exp * k, self.pi_exp * k)

    def same_shape(self, other: StructuredConstant) -> bool:
        return (self.q, self.q_exp, self.logq_exp, self.pi_exp) == (other.q, other.q_exp, other.logq_exp, other.pi_exp)

    def __add__(self, other: StructuredConstant) -> StructuredConstant:
        if self.coeff == 0:
            return other
        if other.coeff == 0:
            return self
        self._base_with(other)
        if not self.same_shape(other):
            raise BaseMismatch("only constants of identical shape can be added exactly")
        return StructuredConstant(self.coeff + other.coeff, self.q, self.q_exp, self.logq_exp, self.pi_exp)

    def numeric(self) -> float:
        value = float(self.coeff)
        if self.q_exp:
            value *= float(self.q) ** float(self.q_exp)
        if self.logq_exp:
            value *= math.log(self.q) ** self.logq_exp
        if self.pi_exp:
            value *= math.pi**self.pi_exp
        return value

    def to_json(self) -> dict:
        return {
            "coeff": str(self.coeff),
            "q": str(self.q),
            "q_exp": str(self.q_exp),
            "logq_exp": self.logq_exp,
            "pi_exp": self.pi_exp,
            "numeric": self.numeric(),
        }
