"""Igusa zeta functions from stratum point counts (Denef's formula).

For good reduction data,

    Z(s) = (q^{-1} mu0)^dim * sum_A N_A * prod_{alpha in A} (q^{f_a} - 1) / (q^{f_a s_a} - 1)

where N_A counts the F_q-points of the open stratum D_A^o. Along a line
s_a = -rho_a + lambda_a s and with u = q^{-s/L} (L clearing the denominators of
f_a lambda_a), each factor becomes (q^f - 1) c u^e / (1 - c u^e) with
c = q^{f rho} and e = f lambda L.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .arith import lcm, prime_power_base, rational_power
from .exactcore import Polynomial, RatFun, StructuredConstant, _truncated_product


class DenefError(ValueError):
    """Base class for validation errors in this module."""


class NonconvergentParameter(DenefError):
    """Some s_alpha has non-positive real part on a populated stratum."""


class IrrationalCoefficient(DenefError):
    """q^{f rho} is irrational, so the series has no rational coefficients."""


@dataclass(frozen=True, slots=True)
class DenefData:
    dim: int
    q: int
    mu0: Fraction
    components: Mapping[str, int]  # id -> f_alpha
    strata: Mapping[frozenset[str], int]  # A -> N_A
    nonempty: frozenset[str] | None = None  # override for "D_alpha(F) is non-empty"

    def __post_init__(self) -> None:
        if prime_power_base(self.q) is None:
            raise DenefError(f"q = {self.q} is not a prime power")
        if self.dim < 0:
            raise DenefError("dimension must be non-negative")
        object.__setattr__(self, "mu0", Fraction(self.mu0))
        strata = {frozenset(str(a) for a in k): int(v) for k, v in self.strata.items()}
        for subset, count in strata.items():
            if count < 0:
                raise DenefError(f"negative point count for {sorted(subset)}")
            if not subset <= set(self.components):
                raise DenefError(f"stratum {sorted(subset)} uses unknown components")
        for alpha, f in self.components.items():
            if int(f) < 1:
                raise DenefError(f"residue degree of {alpha} must be >= 1")
        object.__setattr__(self, "strata", strata)

    @classmethod
    def from_json(cls, obj: Mapping) -> DenefData:
        comps = {str(c["id"]): int(c.get("f", 1)) for c in obj["components"]}
        strata = {frozenset(str(a) for a in s["A"]): int(s["N"]) for s in obj["strata"]}
        nonempty = obj.get("nonempty")
        return cls(
            int(obj["dim"]),
            int(obj["q"]),
            Fraction(str(obj.get("mu0", 1))),
            comps,
            strata,
            frozenset(str(a) for a in nonempty) if nonempty is not None else None,
        )

    @property
    def prefactor(self) -> Fraction:
        return (self.mu0 / self.q) ** self.dim

    def populated_components(self) -> frozenset[str]:
        if self.nonempty is not None:
            return self.nonempty
        return frozenset().union(*(a for a, n in self.strata.items() if n > 0))

    def populated_strata(self) -> list[frozenset[str]]:
        return sorted((a for a, n in self.strata.items() if n > 0), key=lambda a: (len(a), sorted(a)))


@dataclass(frozen=True, slots=True)
class LineSpec:
    """s_alpha = -rho_alpha + lambda_alpha * s."""

    lam: Mapping[str, Fraction]
    rho: Mapping[str, Fraction]

    @classmethod
    def from_json(cls, obj: Mapping) -> LineSpec:
        lam = {str(k): Fraction(str(v["lambda"])) for k, v in obj.items()}
        rho = {str(k): Fraction(str(v["rho"])) for k, v in obj.items()}
        return cls(lam, rho)

    @classmethod
    def volume_line(cls, lam: Mapping[str, Fraction], d: Mapping[str, Fraction]) -> LineSpec:
        """Line for heights relative to L = sum lambda_a D_a and D = sum d_a D_a: rho = d - 1."""
        return cls({k: Fraction(v) for k, v in lam.items()}, {k: Fraction(d[k]) - 1 for k in lam})


def _check_line(data: DenefData, line: LineSpec) -> None:
    for alpha in data.populated_components():
        if alpha not in line.lam or alpha not in line.rho:
            raise DenefError(f"line data missing for component {alpha}")
        if line.lam[alpha] <= 0:
            raise DenefError(f"lambda_{alpha} must be positive")


def scale_factor(data: DenefData, line: LineSpec) -> int:
    """L: the least integer making every f_a lambda_a L integral."""
    comps = data.populated_components()
    return lcm(*((data.components[a] * line.lam[a]).denominator for a in comps)) if comps else 1


def igusa_zeta(data: DenefData, s_values: Mapping[str, complex | Fraction]) -> Fraction | complex:
    """Z at explicit values s_alpha; exact when every q^{f s} is rational."""
    for alpha in data.populated_components():
        s = s_values[alpha]
        if complex(s).real <= 0:
            raise NonconvergentParameter(f"Re s_{alpha} = {complex(s).real} <= 0")
    exact_powers = {}
    for alpha in data.populated_components():
        s = s_values[alpha]
        if isinstance(s, (int, Fraction)):
            exact_powers[alpha] = rational_power(data.q, data.components[alpha] * Fraction(s))
    if all(v is not None for v in exact_powers.values()) and len(exact_powers) == len(data.populated_components()):
        total = Fraction(0)
        for subset, count in data.strata.items():
            if count == 0:
                continue
            term = Fraction(count)
            for alpha in subset:
                term *= (Fraction(data.q) ** data.components[alpha] - 1) / (exact_powers[alpha] - 1)
            total += term
        return data.prefactor * total
    total = 0j
    logq = math.log(data.q)
    for subset, count in data.strata.items():
        if count == 0:
            continue
        term = complex(count)
        for alpha in subset:
            f = data.components[alpha]
            term *= (data.q**f - 1) / (cmath.exp(f * complex(s_values[alpha]) * logq) - 1)
        total += term
    return float(data.prefactor) * total


def igusa_zeta_on_line(data: DenefData, line: LineSpec, s: complex) -> complex:
    """Numerical value of Z(-rho + lambda s) at complex s."""
    _check_line(data, line)
    values = {a: -float(line.rho[a]) + float(line.lam[a]) * complex(s) for a in data.populated_components()}
    return complex(igusa_zeta(data, values))


def _component_coefficient(data: DenefData, line: LineSpec, alpha: str) -> Fraction:
    f = data.components[alpha]
    value = rational_power(data.q, f * line.rho[alpha])
    if value is None:
        raise IrrationalCoefficient(f"q^(f rho) for {alpha} is irrational; no rational expansion exists")
    return value


def igusa_terms(data: DenefData, line: LineSpec) -> tuple[int, dict[frozenset[str], RatFun]]:
    """(L, {A: term}) with each term a rational function of u = q^{-s/L}."""
    _check_line(data, line)
    scale = scale_factor(data, line)
    out = {}
    for subset in data.populated_strata():
        num = Polynomial.constant(data.prefactor * data.strata[subset])
        factors = []
        for alpha in sorted(subset):
            f = data.components[alpha]
            c = _component_coefficient(data, line, alpha)
            e = int(f * line.lam[alpha] * scale)
            num = num * Polynomial.monomial(e, (data.q**f - 1) * c)
            factors.append((c, e, 1))
        out[subset] = RatFun(num, tuple(factors))
    return scale, out


def igusa_ratfun(data: DenefData, line: LineSpec) -> tuple[int, RatFun]:
    scale, terms = igusa_terms(data, line)
    total = RatFun(Polynomial())
    for term in terms.values():
        total = total + term
    return scale, total


@dataclass(frozen=True, slots=True)
class PoleReport:
    a: Fraction | float
    b: int
    leading: StructuredConstant | None  # exact form, when every factor is rational
    leading_value: float
    critical_components: frozenset[str]
    critical_strata: tuple[frozenset[str], ...]

    def to_json(self) -> dict:
        return {
            "a": str(self.a),
            "b": self.b,
            "leading": self.leading.to_json() if self.leading is not None else None,
            "leading_numeric": self.leading_value,
            "critical_components": sorted(self.critical_components),
            "critical_strata": [sorted(s) for s in self.critical_strata],
        }


def pole_report(data: DenefData, line: LineSpec) -> PoleReport:
    """Abscissa a, pole order b and lim_{s -> a} (s - a)^b Z(s)."""
    _check_line(data, line)
    populated = data.populated_components()
    if not populated:
        return PoleReport(float("-inf"), 0, None, 0.0, frozenset(), ())
    ratios = {alpha: line.rho[alpha] / line.lam[alpha] for alpha in populated}
    a = max(ratios.values())
    critical = frozenset(alpha for alpha, r in ratios.items() if r == a)
    counts = {subset: len(subset & critical) for subset in data.populated_strata()}
    b = max(counts.values())
    strata = tuple(s for s in data.populated_strata() if counts[s] == b)
    q = data.q
    exact_total: Fraction | None = Fraction(0)
    numeric_total = 0.0
    for subset in strata:
        exact_term: Fraction | None = Fraction(data.strata[subset])
        numeric_term = float(data.strata[subset])
        for alpha in sorted(subset):
            f, lam, rho = data.components[alpha], line.lam[alpha], line.rho[alpha]
            if alpha in critical:
                factor = Fraction(q**f - 1) / (f * lam)
                exact_term = exact_term * factor if exact_term is not None else None
                numeric_term *= float(factor)
            else:
                exponent = f * (lam * a - rho)
                power = rational_power(q, exponent)
                exact_term = exact_term * (q**f - 1) / (power - 1) if exact_term is not None and power is not None else None
                numeric_term *= (q**f - 1) / (q ** float(exponent) - 1)
        exact_total = exact_total + exact_term if exact_total is not None and exact_term is not None else None
        numeric_total += numeric_term
    logq_power = math.log(q) ** -b
    leading = None
    if exact_total is not None:
        leading = StructuredConstant(data.prefactor * exact_total, q, 0, -b)
    return PoleReport(a, b, leading, float(data.prefactor) * numeric_total * logq_power, critical, strata)


@dataclass(frozen=True, slots=True)
class SeriesData:
    """Z_n = measure of {||f_L|| = q^{-n/L}}; partial_sums[n] = V(q^{n/L})."""

    scale: int
    coefficients: tuple[Fraction, ...]
    partial_sums: tuple[Fraction, ...] = field(repr=False)


def series_coefficients(data: DenefData, line: LineSpec, n: int) -> SeriesData:
    """Coefficients Z_0..Z_{nL} by expanding every stratum term as geometric series.

    This route never forms a common denominator, so it is independent of the
    partial-fraction reconstruction.
    """
    _check_line(data, line)
    scale = scale_factor(data, line)
    top = n * scale
    total = [Fraction(0)] * (top + 1)
    for subset in data.populated_strata():
        series = [Fraction(0)] * (top + 1)
        series[0] = data.prefactor * data.strata[subset]
        for alpha in sorted(subset):
            f = data.components[alpha]
            c = _component_coefficient(data, line, alpha)
            e = int(f * line.lam[alpha] * scale)
            geo = [Fraction(0)] * (top + 1)
            power, k = Fraction(data.q**f - 1) * c, 1
            while k * e <= top:
                geo[k * e] = power
                power *= c
                k += 1
            series = _truncated_product(series, geo, top)
        total = [x + y for x, y in zip(total, series)]
    sums, acc = [], Fraction(0)
    for z in total:
        acc += z
        sums.append(acc)
    return SeriesData(scale, tuple(total), tuple(sums))
