"""Heights on projective space and the exponents and leading constants of
height-ball volumes.

Boundary data are per-component lists: lambda_alpha (coefficients of the
height's divisor L), d_alpha or rho_alpha (coefficients of the volume divisor)
and optional flags restricting to components relevant at a place.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arith import factorize


class HeightError(ValueError):
    """Base class for validation errors in this module."""


class ZeroPoint(HeightError):
    """All coordinates vanish."""


class EmptySupport(HeightError):
    """No component is available for the maximum."""


class InconsistentDiscrepancies(HeightError):
    """The rho and epsilon descriptions disagree."""


class DegenerateInput(HeightError):
    """a = 0, b = 0 or a non-positive lambda."""


def _normalise_point(coords: Sequence) -> tuple[int, ...]:
    fracs = [Fraction(x) for x in coords]
    if all(x == 0 for x in fracs):
        raise ZeroPoint("the point has only zero coordinates")
    den = math.lcm(*(x.denominator for x in fracs))
    ints = [int(x * den) for x in fracs]
    g = math.gcd(*ints)
    return tuple(x // g for x in ints)


def height_Pn(coords: Sequence) -> int:
    """Naive height max |x_i| of a point of P^n(Q) in coprime integer coordinates."""
    return max(abs(x) for x in _normalise_point(coords))


def local_norms(coords: Sequence) -> dict[str, Fraction]:
    """max_i |x_i|_v at the real place ('inf') and at every prime where it is not 1."""
    fracs = [Fraction(x) for x in coords]
    if all(x == 0 for x in fracs):
        raise ZeroPoint("the point has only zero coordinates")
    primes: set[int] = set()
    for x in fracs:
        if x:
            primes |= set(factorize(x.numerator)) | set(factorize(x.denominator))
    out = {"inf": max(abs(x) for x in fracs)}
    for p in sorted(primes):
        best = Fraction(0)
        for x in fracs:
            if x:
                best = max(best, _padic_abs(x, p))
        if best != 1:
            out[str(p)] = best
    return out


def _padic_abs(x: Fraction, p: int) -> Fraction:
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return Fraction(1, p**v) if v >= 0 else Fraction(p ** (-v))


def height_from_places(coords: Sequence) -> Fraction:
    """prod_v max_i |x_i|_v; equals height_Pn by the product formula."""
    out = Fraction(1)
    for value in local_norms(coords).values():
        out *= value
    return out


@dataclass(frozen=True, slots=True)
class Abscissa:
    a: Fraction | float  # -inf when no component is flagged
    b: int
    argmax: tuple[int, ...]


NO_COMPONENT = Abscissa(float("-inf"), 0, ())


def _argmax(values: Sequence[Fraction]) -> tuple[Fraction, tuple[int, ...]]:
    top = max(values)
    return top, tuple(i for i, v in enumerate(values) if v == top)


def _positive(lam: Sequence) -> list[Fraction]:
    out = [Fraction(x) for x in lam]
    if any(x <= 0 for x in out):
        raise DegenerateInput("lambda must be positive")
    return out


def global_abscissa(d: Sequence, lam: Sequence) -> Abscissa:
    """a(L, D) = max d_alpha / lambda_alpha and b = number of maximisers."""
    if not d:
        raise EmptySupport("no boundary components")
    if len(d) != len(lam):
        raise HeightError("d and lambda differ in length")
    lam = _positive(lam)
    top, idx = _argmax([Fraction(x) / l for x, l in zip(d, lam)])
    return Abscissa(top, len(idx), idx)


def local_abscissa(d: Sequence, lam: Sequence, flags: Sequence[bool]) -> Abscissa:
    """sigma = max (d_alpha - 1)/lambda_alpha over flagged components (-inf if none)."""
    lam = _positive(lam)
    if len(flags) != len(lam) or len(d) != len(lam):
        raise HeightError("d, lambda and flags differ in length")
    chosen = [i for i, f in enumerate(flags) if f]
    if not chosen:
        return NO_COMPONENT
    values = [(Fraction(d[i]) - 1) / lam[i] for i in chosen]
    top, idx = _argmax(values)
    return Abscissa(top, len(idx), tuple(chosen[i] for i in idx))


def log_discrepancy_abscissa(
    rho: Sequence,
    lam: Sequence,
    flags: Sequence[bool] | None = None,
    epsilon: Sequence | None = None,
    n_minus_d: Fraction | int | None = None,
) -> Abscissa:
    """a = max (rho_alpha - 1)/lambda_alpha over flagged components.

    When epsilon and n - d are given (1 - rho = (d - n) lambda + epsilon), the
    equivalent expression n - d + max(-epsilon/lambda) is checked against it.
    """
    lam = _positive(lam)
    flags = flags if flags is not None else [True] * len(lam)
    if len(flags) != len(lam) or len(rho) != len(lam) or (epsilon is not None and len(epsilon) != len(lam)):
        raise HeightError("boundary data differ in length")
    chosen = [i for i, f in enumerate(flags) if f]
    if not chosen:
        return NO_COMPONENT
    values = [(Fraction(rho[i]) - 1) / lam[i] for i in chosen]
    top, idx = _argmax(values)
    if epsilon is not None:
        if n_minus_d is None:
            raise HeightError("epsilon needs n - d")
        nd = Fraction(n_minus_d)
        for i in range(len(lam)):
            if 1 - Fraction(rho[i]) != -nd * lam[i] + Fraction(epsilon[i]):
                raise InconsistentDiscrepancies(f"component {i}: 1 - rho != (d - n) lambda + epsilon")
        alt = nd + max(-Fraction(epsilon[i]) / lam[i] for i in chosen)
        if alt != top:
            raise InconsistentDiscrepancies(f"rho gives {top}, epsilon gives {alt}")
    return Abscissa(top, len(idx), tuple(chosen[i] for i in idx))


def global_leading_constant(a, b: int, lam_critical: Sequence, integral):
    """C = integral * prod lambda_alpha^{-1} / (a (b - 1)!).

    ``integral`` may be a Fraction, a float or a StructuredConstant; the result
    has the same type.
    """
    a = Fraction(a)
    if a <= 0 or b < 1 or len(lam_critical) != b:
        raise DegenerateInput("need a > 0, b >= 1 and b critical lambdas")
    lam = _positive(lam_critical)
    factor = Fraction(1)
    for l in lam:
        factor /= l
    factor /= a * math.factorial(b - 1)
    if isinstance(integral, float):
        return integral * float(factor)
    return integral * factor


def x2p1_constant(vol_real: float, zeta_star: float, zeta_two: float = math.pi**2 / 6) -> dict[str, float]:
    """Assemble the constant for the quadric x^2 + yz + 1 = 0 (norm forms of Q(i)).

    vol U(A_f) = zeta*_{Q(i)}(1) / zeta(2), and the residue measure of the
    boundary at the real place contributes c_R = 2, so C = 2 vol D(R) vol U(A_f).
    """
    finite = zeta_star / zeta_two
    constant = global_leading_constant(1, 1, [1], 2.0 * vol_real * finite)
    return {"vol_real": vol_real, "vol_finite": finite, "constant": constant}


def binary_form_data(n: int) -> dict[str, list[Fraction]]:
    """Boundary data for integral binary forms of degree n modulo SL2."""
    if n < 3:
        raise HeightError("degree must be at least 3")
    return {
        "rho": [Fraction(1), Fraction(2)],
        "lambda": [Fraction(n - 2, 2), Fraction(n, 2)],
        "epsilon": [Fraction(0), Fraction(-1)],
    }
