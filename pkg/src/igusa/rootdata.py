"""Root systems from Cartan matrices, the sum of positive roots and the
exponents (sigma, t) for boundary divisors of wonderful compactifications.

Vectors of the weight space are written in simple-root coordinates. The
Cartan matrix follows a_ij = <alpha_i^vee, alpha_j>, so the reflection in
alpha_i is x -> x - (sum_j a_ij x_j) alpha_i.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import Inequality, feasible, fourier_motzkin, inverse, matvec, rank


class RootDataError(ValueError):
    """Invalid root system request."""


class NonDominantWeight(RootDataError):
    """A weight has a negative coordinate on the dominant chamber's dual basis."""


class OrbitBudgetExceeded(RuntimeError):
    """Weyl orbit enumeration exceeded its budget."""


ORBIT_BUDGET = 10**6


def cartan_matrix(kind: str, n: int) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix in Bourbaki numbering (B_n: alpha_n short; C_n: alpha_n long)."""
    kind = kind.upper()
    if n < 1 or n > 8:
        raise RootDataError("rank must be between 1 and 8")
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i: int, j: int, aij: int = -1, aji: int = -1) -> None:
        a[i][j], a[j][i] = aij, aji

    if kind == "A":
        for i in range(n - 1):
            link(i, i + 1)
    elif kind in ("B", "C"):
        if n < 2:
            raise RootDataError(f"{kind}_1 is not a separate type; use A1")
        for i in range(n - 2):
            link(i, i + 1)
        # B: <alpha_{n-1}^vee, alpha_n> = -1, <alpha_n^vee, alpha_{n-1}> = -2
        if kind == "B":
            link(n - 2, n - 1, -1, -2)
        else:
            link(n - 2, n - 1, -2, -1)
    elif kind == "D":
        if n < 3:
            raise RootDataError("D_n needs n >= 3")
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif kind == "G":
        if n != 2:
            raise RootDataError("G only exists in rank 2")
        # alpha_1 short
        link(0, 1, -3, -1)
    elif kind == "F":
        if n != 4:
            raise RootDataError("F only exists in rank 4")
        link(0, 1)
        # alpha_1, alpha_2 long; alpha_3, alpha_4 short
        link(1, 2, -1, -2)
        link(2, 3)
    elif kind == "E":
        if n not in (6, 7, 8):
            raise RootDataError("E_n needs n in 6, 7, 8")
        link(0, 2)
        link(2, 3)
        link(1, 3)
        for i in range(3, n - 1):
            link(i, i + 1)
    else:
        raise RootDataError(f"unknown type {kind!r}")
    return tuple(tuple(row) for row in a)


@dataclass(frozen=True, slots=True)
class RootSystem:
    kind: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    positive_roots: tuple[tuple[int, ...], ...]

    def pairing(self, i: int, x: Sequence) -> Fraction:
        """<alpha_i^vee, x> for x in simple-root coordinates."""
        return sum((Fraction(self.cartan[i][j]) * x[j] for j in range(self.rank)), Fraction(0))

    def reflect(self, i: int, x: Sequence) -> tuple[Fraction, ...]:
        c = self.pairing(i, x)
        return tuple(Fraction(x[j]) - (c if j == i else 0) for j in range(self.rank))

    def fundamental_coordinates(self, x: Sequence) -> tuple[Fraction, ...]:
        return tuple(self.pairing(i, x) for i in range(self.rank))

    def from_fundamental(self, w: Sequence) -> tuple[Fraction, ...]:
        """Simple-root coordinates of sum w_i varpi_i."""
        inv = inverse(self.cartan)
        return tuple(Fraction(x) for x in matvec(inv, [Fraction(v) for v in w]))


def root_system(kind: str, n: int) -> RootSystem:
    """Positive roots by the string algorithm, level by level."""
    a = cartan_matrix(kind, n)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = set(simple)
    level = list(simple)
    while level:
        nxt = []
        for beta in level:
            for i in range(n):
                # largest p with beta - p alpha_i a root
                p = 0
                probe = list(beta)
                while True:
                    probe[i] -= 1
                    if tuple(probe) in roots:
                        p += 1
                    else:
                        break
                pairing = sum(a[i][j] * beta[j] for j in range(n))
                if p - pairing > 0:
                    new = list(beta)
                    new[i] += 1
                    new = tuple(new)
                    if new not in roots:
                        roots.add(new)
                        nxt.append(new)
        level = nxt
    ordered = tuple(sorted(roots, key=lambda r: (sum(r), r)))
    return RootSystem(kind.upper(), n, a, ordered)


def beta_coeffs(rs: RootSystem) -> tuple[int, ...]:
    """Coordinates m_alpha of beta = sum of the positive roots (= 2 rho)."""
    return tuple(sum(r[i] for r in rs.positive_roots) for i in range(rs.rank))


def _check_d(rs: RootSystem, d: Sequence) -> list[Fraction]:
    if len(d) != rs.rank:
        raise RootDataError(f"need {rs.rank} coefficients, got {len(d)}")
    out = [Fraction(x) for x in d]
    if any(x <= 0 for x in out):
        raise RootDataError("all coefficients d_alpha must be positive")
    return out


def sigma_t(rs: RootSystem, d: Sequence) -> tuple[Fraction, int]:
    """sigma = max m_alpha / d_alpha and t = number of alpha attaining it."""
    d = _check_d(rs, d)
    ratios = [Fraction(m) / x for m, x in zip(beta_coeffs(rs), d)]
    sigma = max(ratios)
    return sigma, ratios.count(sigma)


@dataclass(frozen=True, slots=True)
class HullCertificate:
    """Evidence for sigma from the chamber-facet description of the polytope.

    lambda_tilde_sigma is the value max m_alpha / lambda~_alpha obtained from the
    coordinatewise maximum over the weights; sigma itself is the exact least s
    with s * mu >= beta for some convex combination mu of the weights.
    """

    lambda_tilde: tuple[Fraction, ...]
    lambda_tilde_sigma: Fraction
    witness: tuple[Fraction, ...]
    tight: tuple[int, ...]
    single_weight_attains: bool


@dataclass(frozen=True, slots=True)
class HullResult:
    sigma: Fraction
    t: int
    certificate: HullCertificate


def hull_sigma(rs: RootSystem, weights: Sequence[Sequence]) -> HullResult:
    """sigma, t read off the polytope side for weights with non-negative
    simple-root coordinates.

    On the dominant chamber, s phi_Lambda >= phi_beta holds iff some convex
    combination mu of Lambda satisfies s mu >= beta coordinatewise, so
    1/sigma = max{tau : sum w_i lambda_i >= tau beta, w in the simplex}; it is
    computed exactly by Fourier-Motzkin elimination of w. The integer t is the
    dimension of the cone of y >= 0 with <x - lambda, y> >= 0 for every lambda,
    x = beta/sigma, i.e. of the normal cone at x.
    """
    if not weights:
        raise RootDataError("need at least one weight")
    lams = []
    for lam in weights:
        if len(lam) != rs.rank:
            raise RootDataError("weight has the wrong length")
        lam = tuple(Fraction(x) for x in lam)
        if any(x < 0 for x in lam):
            raise NonDominantWeight(f"weight {lam} has a negative coordinate")
        if all(x == 0 for x in lam):
            raise NonDominantWeight("the zero weight does not define a polytope")
        lams.append(lam)
    m = [Fraction(x) for x in beta_coeffs(rs)]
    n, k = rs.rank, len(lams)
    lam_tilde = tuple(max(l[i] for l in lams) for i in range(n))
    tilde_sigma = max(m[i] / lam_tilde[i] if lam_tilde[i] else Fraction(10**30) for i in range(n))

    # variables: w_0..w_{k-1}, tau; maximise tau
    nv = k + 1
    rows: list[Inequality] = []
    for i in range(n):
        coeffs = [-lams[j][i] for j in range(k)] + [m[i]]
        rows.append((coeffs, Fraction(0)))
    for j in range(k):
        rows.append(([Fraction(-int(c == j)) for c in range(nv)], Fraction(0)))
    ones = [Fraction(1)] * k + [Fraction(0)]
    rows.append((ones, Fraction(1)))
    rows.append(([-x for x in ones], Fraction(-1)))
    projected = fourier_motzkin(rows, range(k))
    bounds = [rhs / coeffs[k] for coeffs, rhs in projected if coeffs[k] > 0]
    if not bounds:
        raise RootDataError("polytope does not bound beta")
    tau = min(bounds)
    if tau <= 0:
        raise RootDataError("beta is not reached by the weights")
    sigma = 1 / tau
    x = [mi / sigma for mi in m]

    tight = tuple(i for i in range(n) if any(l[i] == x[i] for l in lams))
    t = _normal_cone_dimension(lams, x)
    attains = any(all(l[i] >= x[i] for i in range(n)) for l in lams)
    witness = next((l for l in lams if all(l[i] >= x[i] for i in range(n))), lam_tilde)
    cert = HullCertificate(lam_tilde, tilde_sigma, tuple(witness), tight, attains)
    return HullResult(sigma, t, cert)


def _normal_cone_dimension(lams: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> int:
    """dim of {y >= 0 : <lambda - x, y> <= 0 for all lambda} via implicit equalities."""
    n = len(x)
    rows: list[Inequality] = [([Fraction(-int(j == i)) for j in range(n)], Fraction(0)) for i in range(n)]
    for lam in lams:
        rows.append(([lam[i] - x[i] for i in range(n)], Fraction(0)))
    implicit = []
    for coeffs, _ in rows:
        # coeffs . y <= 0 is an implicit equality iff coeffs . y <= -1 is infeasible
        if not feasible(rows + [(coeffs, Fraction(-1))], n):
            implicit.append(coeffs)
    return n - (rank(implicit) if implicit else 0)


def weyl_orbit(rs: RootSystem, weight: Sequence, budget: int = ORBIT_BUDGET) -> list[tuple[Fraction, ...]]:
    """Orbit of a weight under the Weyl group, generated by simple reflections."""
    start = tuple(Fraction(x) for x in weight)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(rs.rank):
                w = rs.reflect(i, v)
                if w not in seen:
                    seen.add(w)
                    if len(seen) > budget:
                        raise OrbitBudgetExceeded(f"orbit larger than {budget}")
                    nxt.append(w)
        frontier = nxt
    return sorted(seen)


def dominant_coweight(rs: RootSystem, y: Sequence) -> tuple[Fraction, ...]:
    """Move y (coordinates dual to the simple roots) into the dominant chamber.

    The contragredient reflection is y -> y - y_i * (row i of the Cartan matrix).
    """
    y = [Fraction(v) for v in y]
    for _ in range(10**6):
        bad = next((i for i in range(rs.rank) if y[i] < 0), None)
        if bad is None:
            return tuple(y)
        yi = y[bad]
        y = [y[j] - yi * rs.cartan[bad][j] for j in range(rs.rank)]
    raise OrbitBudgetExceeded("dominance reduction did not terminate")


def support_function(orbit: Sequence[Sequence[Fraction]], y: Sequence) -> Fraction:
    """phi(y) = max over the orbit of <lambda, y>."""
    return max(sum((Fraction(l[i]) * Fraction(y[i]) for i in range(len(y))), Fraction(0)) for l in orbit)


def weyl_group_order(rs: RootSystem, budget: int = ORBIT_BUDGET) -> int:
    """|W| as the orbit size of a regular weight (rho)."""
    rho = rs.from_fundamental([1] * rs.rank)
    return len(weyl_orbit(rs, rho, budget))


def parse_type(text: str) -> tuple[str, int]:
    text = text.strip().upper()
    if len(text) >= 2 and text[0].isalpha() and text[1:].isdigit():
        return text[0], int(text[1:])
    raise RootDataError(f"cannot parse root system type {text!r}")


def all_d_vectors(rank_: int, values: Sequence[int] = (1, 2, 3)) -> list[tuple[int, ...]]:
    return list(itertools.product(values, repeat=rank_))
