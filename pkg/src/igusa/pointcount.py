"""Exhaustive point counting of polynomial systems over Z/m.

Counting is brute force but vectorised: the trailing variables are evaluated on
a numpy grid while the leading ones are looped over, so the number of residues
visited is exactly m^n and is checked against a budget before any work starts.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .arith import is_prime

DEFAULT_BUDGET = 10**9
_GRID_LIMIT = 1 << 21


class PointCountError(ValueError):
    """Invalid polynomial system or stratum specification."""


class BudgetExceeded(RuntimeError):
    """The enumeration would visit more residues than allowed."""


Monomial = tuple[int, tuple[int, ...]]  # (coefficient, exponents)


@dataclass(frozen=True, slots=True)
class Poly:
    """Sparse integer polynomial in a fixed number of variables."""

    nvars: int
    terms: tuple[Monomial, ...]

    @classmethod
    def from_json(cls, terms: Sequence[Mapping], nvars: int) -> Poly:
        out = []
        for term in terms:
            exps = tuple(int(e) for e in term["exps"])
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise PointCountError(f"monomial {term!r} does not match {nvars} variables")
            out.append((int(term["coef"]), exps))
        return cls(nvars, tuple(out))

    def to_json(self) -> list[dict]:
        return [{"coef": c, "exps": list(e)} for c, e in self.terms]

    def is_homogeneous(self) -> bool:
        return len({sum(e) for c, e in self.terms if c}) <= 1

    def evaluate(self, point: Sequence[int], modulus: int) -> int:
        total = 0
        for coef, exps in self.terms:
            term = coef
            for x, e in zip(point, exps):
                term = term * pow(x, e, modulus) % modulus
            total += term
        return total % modulus


@dataclass(frozen=True, slots=True)
class PolySystem:
    """Equations f = 0 and inequations g != 0 in n affine (or homogeneous) variables."""

    nvars: int
    equations: tuple[Poly, ...] = ()
    inequations: tuple[Poly, ...] = ()
    declared_dimension: int | None = None
    projective: bool = False

    def __post_init__(self) -> None:
        for poly in self.equations + self.inequations:
            if poly.nvars != self.nvars:
                raise PointCountError("polynomial arity differs from the system's")
        if self.projective and not all(p.is_homogeneous() for p in self.equations + self.inequations):
            raise PointCountError("projective systems need homogeneous polynomials")

    @classmethod
    def from_json(cls, obj: Mapping) -> PolySystem:
        n = int(obj["nvars"])
        return cls(
            n,
            tuple(Poly.from_json(p, n) for p in obj.get("equations", [])),
            tuple(Poly.from_json(p, n) for p in obj.get("inequations", [])),
            obj.get("declared_dimension"),
            bool(obj.get("projective", False)),
        )

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "equations": [p.to_json() for p in self.equations],
            "inequations": [p.to_json() for p in self.inequations],
            "declared_dimension": self.declared_dimension,
            "projective": self.projective,
        }

    def with_extra(self, equations: Sequence[Poly] = (), inequations: Sequence[Poly] = ()) -> PolySystem:
        return PolySystem(
            self.nvars,
            self.equations + tuple(equations),
            self.inequations + tuple(inequations),
            self.declared_dimension,
            self.projective,
        )


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("IGUSA_THREADS", "1")))
    except ValueError:
        return 1


class _GridEvaluator:
    """Evaluates polynomials mod m with the last k variables on a grid."""

    def __init__(self, system: PolySystem, modulus: int, grid_vars: int) -> None:
        self.system = system
        self.m = modulus
        self.k = grid_vars
        self.lead = system.nvars - grid_vars
        max_exp = max((e for p in system.equations + system.inequations for _, es in p.terms for e in es), default=0)
        base = np.arange(modulus, dtype=np.int64)
        self.powers = [np.ones(modulus, dtype=np.int64)]
        for _ in range(max_exp):
            self.powers.append(self.powers[-1] * base % modulus)
        shape_unit = [1] * grid_vars
        self.grid_powers = []
        for axis in range(grid_vars):
            shape = list(shape_unit)
            shape[axis] = modulus
            self.grid_powers.append([p.reshape(shape) for p in self.powers])

    def _poly_values(self, poly: Poly, prefix: Sequence[int]) -> np.ndarray:
        m = self.m
        total = np.zeros((m,) * self.k, dtype=np.int64) if self.k else np.zeros((), dtype=np.int64)
        for coef, exps in poly.terms:
            scalar = coef % m
            for x, e in zip(prefix, exps[: self.lead]):
                scalar = scalar * pow(x, e, m) % m
            if scalar == 0:
                continue
            term = np.int64(scalar)
            for axis, e in enumerate(exps[self.lead :]):
                if e:
                    term = term * self.grid_powers[axis][e] % m
            total = (total + term) % m
        return total

    def count_prefix(self, prefix: Sequence[int], exclude_origin: bool) -> int:
        mask = np.ones((self.m,) * self.k, dtype=bool) if self.k else np.ones((), dtype=bool)
        for poly in self.system.equations:
            mask &= self._poly_values(poly, prefix) == 0
        for poly in self.system.inequations:
            mask &= self._poly_values(poly, prefix) != 0
        count = int(mask.sum())
        if exclude_origin and not any(prefix) and mask.reshape(-1)[0]:
            count -= 1
        return count


def count_points(system: PolySystem, modulus: int, budget: int = DEFAULT_BUDGET, exclude_origin: bool = False) -> int:
    """Number of x in (Z/m)^n with every equation = 0 and every inequation != 0 mod m.

    For projective systems this counts points of the affine cone minus the origin.
    """
    if modulus < 2:
        raise PointCountError("modulus must be at least 2")
    n = system.nvars
    if modulus**n > budget:
        raise BudgetExceeded(f"{modulus}^{n} residues exceed the budget {budget}")
    grid_vars = 0
    while grid_vars < n and modulus ** (grid_vars + 1) <= _GRID_LIMIT:
        grid_vars += 1
    evaluator = _GridEvaluator(system, modulus, grid_vars)
    prefixes = itertools.product(range(modulus), repeat=n - grid_vars)
    exclude = exclude_origin or system.projective
    threads = _thread_count()
    if threads == 1:
        return sum(evaluator.count_prefix(p, exclude) for p in prefixes)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(lambda p: evaluator.count_prefix(p, exclude), prefixes))


def count_projective(system: PolySystem, q: int, budget: int = DEFAULT_BUDGET) -> int:
    """Points of a homogeneous system in P^{n-1}(F_q), q prime."""
    if not is_prime(q):
        raise PointCountError("projective counting is implemented over prime fields")
    if not system.projective:
        system = PolySystem(system.nvars, system.equations, system.inequations, system.declared_dimension, True)
    cone = count_points(system, q, budget)
    if cone % (q - 1):
        raise PointCountError(f"cone count {cone} is not divisible by q - 1 = {q - 1}")
    return cone // (q - 1)


@dataclass(frozen=True, slots=True)
class StratumSpec:
    """Ambient system X and boundary components D_alpha = X cap {h_alpha = 0}."""

    ambient: PolySystem
    components: Mapping[str, Poly] = field(default_factory=dict)

    @classmethod
    def from_json(cls, obj: Mapping) -> StratumSpec:
        ambient = PolySystem.from_json(obj["ambient"])
        comps = {str(k): Poly.from_json(v, ambient.nvars) for k, v in obj["components"].items()}
        return cls(ambient, comps)


def stratum_system(spec: StratumSpec, subset: Sequence[str]) -> PolySystem:
    """System cutting out the open stratum D_A^o = D_A minus the other components."""
    unknown = set(subset) - set(spec.components)
    if unknown:
        raise PointCountError(f"unknown components {sorted(unknown)}")
    inside = [spec.components[a] for a in subset]
    outside = [h for name, h in spec.components.items() if name not in subset]
    return spec.ambient.with_extra(inside, outside)


def count_stratum(spec: StratumSpec, subset: Sequence[str], q: int, budget: int = DEFAULT_BUDGET) -> int:
    """#D_A^o(F_q) for a prime q (projective when the ambient system is)."""
    if not is_prime(q):
        raise PointCountError("strata are counted over prime fields")
    system = stratum_system(spec, subset)
    if system.projective:
        return count_projective(system, q, budget)
    return count_points(system, q, budget)


def all_strata_counts(spec: StratumSpec, q: int, budget: int = DEFAULT_BUDGET) -> dict[frozenset[str], int]:
    names = sorted(spec.components)
    out = {}
    for r in range(len(names) + 1):
        for subset in itertools.combinations(names, r):
            out[frozenset(subset)] = count_stratum(spec, subset, q, budget)
    return out


def weil_volume(system: PolySystem, p: int, k: int, budget: int = DEFAULT_BUDGET) -> Fraction:
    """#X(Z/p^k) / p^{k dim}, the level-k approximation of the p-adic volume."""
    if system.declared_dimension is None:
        raise PointCountError("weil_volume needs a declared dimension")
    modulus = p**k
    return Fraction(count_points(system, modulus, budget), modulus**system.declared_dimension)
