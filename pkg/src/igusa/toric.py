"""Fans with a finite group action, invariant sublattices, induced fans and the
Clemens complexes of toric boundaries.

Cones are simplicial and given by primitive ray generators. All lattice work
(kernels, coordinates, intersections) is exact integer or rational arithmetic.
"""

from __future__ import annotations

import itertools
from math import gcd
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .clemens import (
    ClemensComplex,
    DivisorIncidence,
    Face,
    GroupAction,
    analytic_subcomplex,
    build_clemens,
    fixed_subcomplex,
)
from .linalg import (
    Inequality,
    determinant,
    feasible,
    hermite_row_basis,
    integer_kernel,
    inverse,
    matmul,
    matvec,
    primitive,
    rank,
    solve,
)

Vector = tuple[int, ...]


class FanValidationFailure(ValueError):
    """The cones do not form a fan, or the action does not preserve it."""


@dataclass(frozen=True, slots=True)
class Fan:
    rank: int
    cones: tuple[frozenset[Vector], ...]  # every face included, {0} as the empty set
    action: tuple[tuple[tuple[int, ...], ...], ...] = ()  # integer matrices acting on N

    @classmethod
    def from_json(cls, obj: Mapping) -> Fan:
        n = int(obj["rank"])
        cones = [frozenset(tuple(int(x) for x in ray) for ray in cone) for cone in obj["cones"]]
        action = tuple(tuple(tuple(int(x) for x in row) for row in m) for m in obj.get("action", []))
        return make_fan(n, cones, action)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "cones": [sorted(list(r) for r in c) for c in self.sorted_cones() if c],
            "action": [[list(row) for row in m] for m in self.action],
        }

    @property
    def rays(self) -> list[Vector]:
        return sorted(set().union(*self.cones)) if self.cones else []

    def sorted_cones(self) -> list[frozenset[Vector]]:
        return sorted(self.cones, key=lambda c: (len(c), sorted(c)))

    def maximal_cones(self) -> list[frozenset[Vector]]:
        return [c for c in self.sorted_cones() if not any(c < d for d in self.cones)]

    def is_smooth(self) -> bool:
        for cone in self.cones:
            rays = sorted(cone)
            if len(rays) and not _is_part_of_basis(rays, self.rank):
                return False
        return True


def _is_part_of_basis(rays: Sequence[Vector], n: int) -> bool:
    """Rays extend to a Z-basis iff the gcd of maximal minors is 1."""
    k = len(rays)
    g = 0
    for cols in itertools.combinations(range(n), k):
        minor = determinant([[r[c] for c in cols] for r in rays])
        g = gcd(g, int(minor))
    return g == 1


def _apply(matrix: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    return tuple(int(x) for x in matvec(matrix, v))


def make_fan(n: int, cones: Sequence[Sequence[Vector]], action: Sequence = ()) -> Fan:
    """Validate cones, close them under faces and check the action."""
    closed: set[frozenset[Vector]] = {frozenset()}
    for cone in cones:
        cone = frozenset(tuple(int(x) for x in r) for r in cone)
        for r in cone:
            if len(r) != n:
                raise FanValidationFailure(f"ray {r} does not have {n} coordinates")
            if primitive(r) != r:
                raise FanValidationFailure(f"ray {r} is not primitive")
        if rank([list(r) for r in cone]) != len(cone):
            raise FanValidationFailure(f"cone {sorted(cone)} is not simplicial")
        for k in range(1, len(cone) + 1):
            closed.update(frozenset(c) for c in itertools.combinations(sorted(cone), k))
    fan = Fan(n, tuple(sorted(closed, key=lambda c: (len(c), sorted(c)))), tuple(tuple(tuple(row) for row in m) for m in action))
    maximal = fan.maximal_cones()
    for first, second in itertools.combinations(maximal, 2):
        if not _meet_in_common_face(first, second, n):
            raise FanValidationFailure(f"cones {sorted(first)} and {sorted(second)} overlap beyond a common face")
    for m in fan.action:
        if len(m) != n or any(len(row) != n for row in m) or abs(determinant(m)) != 1:
            raise FanValidationFailure("action matrices must be invertible integer n x n matrices")
        for cone in fan.cones:
            if frozenset(_apply(m, r) for r in cone) not in closed:
                raise FanValidationFailure(f"action does not map cone {sorted(cone)} to a cone")
    return fan


def _meet_in_common_face(first: frozenset[Vector], second: frozenset[Vector], n: int) -> bool:
    """Check sigma cap tau = cone(common rays) for simplicial cones, exactly.

    A point sum a_i v_i = sum b_j w_j with some a_i > 0 on a ray outside the
    common face would witness a bad overlap; its existence is a linear
    feasibility problem settled by Fourier-Motzkin elimination.
    """
    common = first & second
    v = sorted(first)
    w = sorted(second - common)
    extra = [i for i, r in enumerate(v) if r not in common]
    if not extra or not w:
        return True
    nv = len(v) + len(w)
    rows: list[Inequality] = []
    for coord in range(n):
        coeffs = [Fraction(r[coord]) for r in v] + [Fraction(-r[coord]) for r in w]
        rows.append((coeffs, Fraction(0)))
        rows.append(([-c for c in coeffs], Fraction(0)))
    for i in range(nv):
        rows.append(([Fraction(-int(j == i)) for j in range(nv)], Fraction(0)))
    rows.append(([Fraction(-1) if j in extra else Fraction(0) for j in range(nv)], Fraction(-1)))
    return not feasible(rows, nv)


# ---------------------------------------------------------------------------
# invariant sublattice and induced fan
# ---------------------------------------------------------------------------


def invariant_sublattice(fan: Fan) -> list[Vector]:
    """Z-basis of N0 = {x in N : g x = x for all g}, a saturated sublattice."""
    n = fan.rank
    rows = []
    for m in fan.action:
        for i in range(n):
            rows.append([m[i][j] - int(i == j) for j in range(n)])
    basis = integer_kernel(rows, n) if rows else [[int(i == j) for j in range(n)] for i in range(n)]
    # Hermite form gives a canonical basis
    return [tuple(v) for v in hermite_row_basis(basis)]


def _orbits_on_rays(fan: Fan, cone: frozenset[Vector]) -> list[frozenset[Vector]]:
    remaining = set(cone)
    out = []
    while remaining:
        start = remaining.pop()
        orbit, frontier = {start}, [start]
        while frontier:
            r = frontier.pop()
            for m in fan.action:
                image = _apply(m, r)
                if image not in orbit:
                    orbit.add(image)
                    frontier.append(image)
        remaining -= orbit
        out.append(frozenset(orbit))
    return sorted(out, key=sorted)


def invariant_cones(fan: Fan) -> list[frozenset[Vector]]:
    return [c for c in fan.sorted_cones() if all(frozenset(_apply(m, r) for r in c) == c for m in fan.action)]


def _coordinates(basis: Sequence[Vector], v: Sequence[int]) -> Vector:
    cols = [[basis[j][i] for j in range(len(basis))] for i in range(len(v))]
    sol = solve(cols, [Fraction(x) for x in v])
    if sol is None or any(x.denominator != 1 for x in sol):
        raise FanValidationFailure(f"{tuple(v)} is not in the invariant lattice")
    return tuple(int(x) for x in sol)


def induced_fan(fan: Fan) -> tuple[Fan, list[Vector]]:
    """Fan Sigma_0 = {sigma cap N0_R : sigma invariant} in coordinates of a basis of N0.

    For an invariant simplicial cone, sigma cap N0_R is generated by the sums of
    the ray orbits.
    """
    basis = invariant_sublattice(fan)
    cones = []
    for cone in invariant_cones(fan):
        gens = []
        for orbit in _orbits_on_rays(fan, cone):
            total = [sum(r[i] for r in orbit) for i in range(fan.rank)]
            gens.append(primitive(_coordinates(basis, total)))
        cones.append(gens)
    if not basis:
        return Fan(0, (frozenset(),)), basis
    return make_fan(len(basis), [c for c in cones if c]), basis


def fans_equivalent(first: Fan, second: Fan) -> bool:
    """Is there a unimodular map sending the cones of one fan onto the other's?"""
    if first.rank != second.rank or len(first.cones) != len(second.cones):
        return False
    n = first.rank
    if n == 0:
        return True
    rays1, rays2 = first.rays, second.rays
    if len(rays1) != len(rays2):
        return False
    frame = next((list(c) for c in itertools.combinations(rays1, n) if rank([list(r) for r in c]) == n), None)
    if frame is None:
        return False
    cones2 = set(second.cones)
    for images in itertools.permutations(rays2, n):
        # M * frame_i = images_i  =>  M = Images * Frame^{-1}
        frame_cols = [[frame[j][i] for j in range(n)] for i in range(n)]
        if determinant(frame_cols) == 0:
            continue
        img_cols = [[images[j][i] for j in range(n)] for i in range(n)]
        m = matmul(img_cols, inverse(frame_cols))
        if any(Fraction(x).denominator != 1 for row in m for x in row) or abs(determinant(m)) != 1:
            continue
        mapped = {frozenset(tuple(int(x) for x in matvec(m, r)) for r in c) for c in first.cones}
        if mapped == cones2:
            return True
    return False


# ---------------------------------------------------------------------------
# Clemens complexes
# ---------------------------------------------------------------------------


def _ray_name(r: Vector) -> str:
    return "(" + ",".join(str(x) for x in r) + ")"


def toric_incidence(fan: Fan) -> DivisorIncidence:
    """Boundary incidence data of the toric variety: one face per non-zero cone."""
    names = {r: _ray_name(r) for r in fan.rays}
    comps = {names[r]: 1 for r in fan.rays}
    faces = tuple(
        Face(frozenset(names[r] for r in c), "cone" + "".join(sorted(names[r] for r in c)), True)
        for c in fan.sorted_cones()
        if c
    )
    gens = tuple({names[r]: names[_apply(m, r)] for r in fan.rays} for m in fan.action)
    smaps = tuple(
        {
            "cone" + "".join(sorted(names[r] for r in c)): "cone" + "".join(sorted(names[_apply(m, r)] for r in c))
            for c in fan.cones
            if c
        }
        for m in fan.action
    )
    return DivisorIncidence(comps, faces, GroupAction(gens, smaps))


def toric_clemens(fan: Fan) -> tuple[ClemensComplex, ClemensComplex]:
    """(geometric complex, analytic complex). Over a number field every
    invariant torus orbit has rational points, so the analytic complex is the
    fixed subcomplex."""
    incidence = toric_incidence(fan)
    geometric = build_clemens(incidence)
    analytic = analytic_subcomplex(fixed_subcomplex(geometric, incidence.action))
    return geometric, analytic


def analytic_face_dimensions(fan: Fan) -> dict[frozenset[Vector], int]:
    """dim(sigma cap N0_R) - 1 for every invariant cone."""
    return {c: len(_orbits_on_rays(fan, c)) - 1 for c in invariant_cones(fan) if c}
