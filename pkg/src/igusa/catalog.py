"""Built-in inputs for the end-to-end example pipelines."""

from __future__ import annotations

from fractions import Fraction

from .galois import PermModule, VirtualModule, ep_virtual
from .pointcount import Poly, PolySystem, StratumSpec
from .toric import Fan, make_fan


def quadric_affine() -> PolySystem:
    """U: x^2 + y z + 1 = 0 in affine 3-space."""
    eq = Poly(3, ((1, (2, 0, 0)), (1, (0, 1, 1)), (1, (0, 0, 0))))
    return PolySystem(3, (eq,), (), declared_dimension=2)


def quadric_strata() -> StratumSpec:
    """X: X^2 + Y Z + T^2 = 0 in P^3 with boundary D: T = 0."""
    eq = Poly(4, ((1, (2, 0, 0, 0)), (1, (0, 1, 1, 0)), (1, (0, 0, 0, 2))))
    boundary = Poly(4, ((1, (0, 0, 0, 1)),))
    return StratumSpec(PolySystem(4, (eq,), (), declared_dimension=2, projective=True), {"D": boundary})


def quadric_ep() -> VirtualModule:
    """EP(U) = [Z] - Pic(X): one boundary component, two rulings swapped when (-4/p) = -1."""
    return ep_virtual(PermModule.trivial(1), PermModule.quadratic(-4))


def quadric_volume(p: int) -> Fraction:
    """vol U(Z_p) = 1 + (-1/p)/p at odd p (Weil's formula with the point count)."""
    chi = 1 if p % 4 == 1 else -1
    return 1 + Fraction(chi, p)


DYADIC_VOLUME = Fraction(3, 4)


def fan_p1xp1_swap() -> Fan:
    cones = [[(1, 0), (0, 1)], [(0, 1), (-1, 0)], [(-1, 0), (0, -1)], [(0, -1), (1, 0)]]
    return make_fan(2, cones, [((0, 1), (1, 0))])


def fan_p1() -> Fan:
    return make_fan(1, [[(1,)], [(-1,)]])


def fan_p2() -> Fan:
    return make_fan(2, [[(1, 0), (0, 1)], [(0, 1), (-1, -1)], [(-1, -1), (1, 0)]])
