"""Artin L-factors of permutation modules and regularised Euler products.

A permutation module is described by the cycle type of Frobenius at each place.
For a permutation matrix P with cycles of lengths l_i,
det(1 - x P) = prod_i (1 - x^{l_i}), so the local factor at q is
prod_i (1 - q^{-l_i s})^{-1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .arith import kronecker, primes_up_to
from .exactcore import Polynomial, RatFun


class GaloisError(ValueError):
    """Base class for validation errors in this module."""


class UnknownPlace(GaloisError):
    """No Frobenius data was supplied for the requested place."""


class NonPositive(GaloisError):
    """A local factor is not positive at s = 1."""


class PlaceSetMismatch(GaloisError):
    """Virtual module parts carry data for different sets of places."""


class CallbackFailure(RuntimeError):
    """A user supplied local-volume callback raised or returned garbage."""


CycleType = tuple[int, ...]


def _check_cycle_type(cycles: Sequence[int], size: int) -> CycleType:
    out = tuple(sorted((int(c) for c in cycles), reverse=True))
    if any(c < 1 for c in out) or sum(out) != size:
        raise GaloisError(f"cycle type {cycles!r} is not a partition of {size}")
    return out


def cycle_type_of(perm: Sequence[int]) -> CycleType:
    """Cycle type of a permutation given as an image list on 0..n-1."""
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        length, i = 0, start
        while not seen[i]:
            seen[i] = True
            i = perm[i]
            length += 1
        out.append(length)
    return tuple(sorted(out, reverse=True))


@dataclass(frozen=True, slots=True)
class PermModule:
    """Z[set] with Frobenius acting by a permutation of known cycle type.

    ``frobenius`` maps a place (a prime, or "*" for the default) to a cycle
    type; ``rule`` optionally derives the cycle type from the prime, e.g.
    ``"chi:-4"`` for the two-point set swapped exactly when (-4/p) = -1.
    """

    size: int
    frobenius: Mapping[str, CycleType] = field(default_factory=dict)
    rule: str | None = None

    def __post_init__(self) -> None:
        checked = {str(k): _check_cycle_type(v, self.size) for k, v in self.frobenius.items()}
        object.__setattr__(self, "frobenius", checked)
        if self.rule is not None:
            kind, _, arg = self.rule.partition(":")
            if kind == "chi":
                if self.size != 2:
                    raise GaloisError("a quadratic-character rule needs a two-point set")
                int(arg)
            elif kind != "trivial":
                raise GaloisError(f"unknown Frobenius rule {self.rule!r}")

    @classmethod
    def trivial(cls, size: int = 1) -> PermModule:
        return cls(size, rule="trivial")

    @classmethod
    def quadratic(cls, discriminant: int) -> PermModule:
        return cls(2, rule=f"chi:{discriminant}")

    @classmethod
    def from_json(cls, obj: Mapping) -> PermModule:
        size = int(obj["size"])
        frob: dict[str, CycleType] = {}
        rule = obj.get("rule")
        for place, value in obj.get("frobenius", {}).items():
            if isinstance(value, str):
                if place != "*":
                    raise GaloisError("string rules are only accepted for the default place '*'")
                rule = value
            else:
                frob[str(place)] = tuple(value)
        return cls(size, frob, rule)

    def places(self) -> frozenset[str]:
        """Explicitly listed places; '*' means all places are covered."""
        if self.rule is not None:
            return frozenset({"*"})
        return frozenset(self.frobenius)

    def cycle_type(self, place: int | str) -> CycleType:
        key = str(place)
        if key in self.frobenius:
            return self.frobenius[key]
        if self.rule is not None:
            kind, _, arg = self.rule.partition(":")
            if kind == "trivial":
                return (1,) * self.size
            chi = kronecker(int(arg), int(place))
            # at a ramified place only the inertia invariants (rank one) remain
            return (1, 1) if chi == 1 else (2,) if chi == -1 else (1,)
        if "*" in self.frobenius:
            return self.frobenius["*"]
        raise UnknownPlace(f"no Frobenius data at {place}")


def _cycles_polynomial(cycles: Iterable[int]) -> Polynomial:
    out = Polynomial.constant(1)
    for length in cycles:
        out = out * Polynomial((Fraction(1),) + (Fraction(0),) * (length - 1) + (Fraction(-1),))
    return out


@dataclass(frozen=True, slots=True)
class VirtualModule:
    """Formal difference plus - minus of permutation modules."""

    plus: tuple[PermModule, ...] = ()
    minus: tuple[PermModule, ...] = ()

    def __post_init__(self) -> None:
        covered = [m.places() for m in self.plus + self.minus]
        explicit = [p for p in covered if "*" not in p]
        if explicit and any(p != explicit[0] for p in explicit):
            raise PlaceSetMismatch("modules list different places")


def artin_local_factor(module: PermModule | VirtualModule, place: int) -> RatFun:
    """L_p(s, M) as a rational function of T = p^{-s}."""
    if isinstance(module, PermModule):
        module = VirtualModule((module,))
    num = Polynomial.constant(1)
    factors: list[tuple[int, int, int]] = []
    for part in module.plus:
        for length in part.cycle_type(place):
            factors.append((1, length, 1))
    for part in module.minus:
        num = num * _cycles_polynomial(part.cycle_type(place))
    return RatFun(num, tuple(factors))


def local_factor_value(module: PermModule | VirtualModule, place: int, s) -> Fraction | float:
    """L_p(s, M) at a point; exact when s is an integer."""
    if isinstance(s, int) or (isinstance(s, Fraction) and s.denominator == 1):
        return artin_local_factor(module, place)(Fraction(1, place) ** int(s))
    return artin_local_factor(module, place)(float(place) ** (-float(s)))


def positivity_at_one(module: PermModule | VirtualModule, place: int) -> Fraction:
    value = local_factor_value(module, place, 1)
    if value <= 0:
        raise NonPositive(f"L_{place}(1) = {value} is not positive")
    return value


def ep_virtual(boundary: PermModule, picard: PermModule) -> VirtualModule:
    """EP = Z[boundary components] - Pic, as a virtual permutation module."""
    b, p = boundary.places(), picard.places()
    if "*" not in b and "*" not in p and b != p:
        raise PlaceSetMismatch(f"boundary places {sorted(b)} differ from Picard places {sorted(p)}")
    return VirtualModule((boundary,), (picard,))


def convergence_factor(first: PermModule | VirtualModule, second: PermModule | VirtualModule, place: int) -> Fraction:
    """lambda_p = L_p(1, M0) / L_p(1, M1)."""
    return local_factor_value(first, place, 1) / local_factor_value(second, place, 1)


@dataclass(frozen=True, slots=True)
class TruncatedProduct:
    value: float
    tail_bound: float
    primes_used: int
    cutoff: int


def truncated_regularized_product(
    local_volume: Callable[[int], float | Fraction],
    module: PermModule | VirtualModule,
    prime_bound: int,
    exceptional: Mapping[int, float | Fraction] | None = None,
) -> TruncatedProduct:
    """prod_{p <= P} L_p(1, M) * vol_p, with exceptional primes given explicitly.

    The product is accumulated as a sum of logarithms in increasing prime order
    so the result is reproducible bit for bit. The tail estimate assumes
    |L_p vol_p - 1| <= C p^{-2} with C read off the last hundred primes.
    """
    exceptional = dict(exceptional or {})
    log_total = 0.0
    worst = 0.0
    primes = primes_up_to(prime_bound)
    for index, p in enumerate(primes):
        if p in exceptional:
            term = float(exceptional[p])
        else:
            try:
                vol = local_volume(p)
            except Exception as exc:  # noqa: BLE001 - reported with context
                raise CallbackFailure(f"local volume callback failed at p = {p}: {exc}") from exc
            if vol is None or not math.isfinite(float(vol)):
                raise CallbackFailure(f"local volume callback returned {vol!r} at p = {p}")
            term = float(local_factor_value(module, p, 1)) * float(vol)
        if term <= 0:
            raise NonPositive(f"local term at p = {p} is {term}")
        log_total += math.log(term)
        if index >= len(primes) - 100:
            worst = max(worst, abs(term - 1) * p * p)
    return TruncatedProduct(math.exp(log_total), worst / max(prime_bound, 1), len(primes), prime_bound)
