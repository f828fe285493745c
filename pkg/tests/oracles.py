"""Reference computations that share no code with the library."""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
from scipy.spatial import ConvexHull


def naive_series(num, factors, n):
    """Taylor coefficients of num(T) / prod (1 - c T^d)^m by repeated long division."""
    coeffs = [Fraction(num[i]) if i < len(num) else Fraction(0) for i in range(n + 1)]
    for c, d, m in factors:
        for _ in range(m):
            # divide by (1 - c T^d): out[k] = coeffs[k] + c * out[k - d]
            out = []
            for k in range(n + 1):
                out.append(coeffs[k] + (Fraction(c) * out[k - d] if k >= d else 0))
            coeffs = out
    return coeffs


def brute_count(poly, nvars, modulus):
    """#{x in (Z/m)^n : poly(x) = 0 mod m}, one point at a time."""
    return sum(1 for x in itertools.product(range(modulus), repeat=nvars) if poly(*x) % modulus == 0)


def brute_projective_count(poly, nvars, p):
    """Points of the projective hypersurface over F_p, via normalised representatives."""
    total = 0
    for x in itertools.product(range(p), repeat=nvars):
        lead = next((v for v in x if v), None)
        if lead == 1 and poly(*x) % p == 0:
            total += 1
    return total


def annulus_sums(q, weight, n):
    """Z_k for the measure of {|x| = q^{-k}} on Z_q weighted by |x|^{weight}."""
    q = Fraction(q)
    return [(1 - 1 / q) * q ** (-k) * q ** (-weight * k) for k in range(n + 1)]


# root systems in Bourbaki numbering; a[i][j] = <alpha_i^vee, alpha_j>
CARTAN = {
    ("A", 1): ((2,),),
    ("A", 2): ((2, -1), (-1, 2)),
    ("A", 3): ((2, -1, 0), (-1, 2, -1), (0, -1, 2)),
    ("B", 2): ((2, -1), (-2, 2)),
    ("G", 2): ((2, -3), (-1, 2)),
}

POSITIVE_ROOTS = {
    ("A", 1): [(1,)],
    ("A", 2): [(1, 0), (0, 1), (1, 1)],
    ("A", 3): [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1), (1, 1, 1)],
    ("B", 2): [(1, 0), (0, 1), (1, 1), (1, 2)],
    ("G", 2): [(1, 0), (0, 1), (1, 1), (2, 1), (3, 1), (3, 2)],
}

WEYL_ORDER = {("A", 1): 2, ("A", 2): 6, ("A", 3): 24, ("B", 2): 8, ("G", 2): 12}


def weyl_orbit(kind, rank, weight):
    a = CARTAN[(kind, rank)]
    start = tuple(Fraction(x) for x in weight)
    seen, frontier = {start}, [start]
    while frontier:
        x = frontier.pop()
        for i in range(rank):
            c = sum(a[i][j] * x[j] for j in range(rank))
            y = tuple(x[j] - (c if j == i else 0) for j in range(rank))
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return sorted(seen)


def is_dominant(kind, rank, weight):
    a = CARTAN[(kind, rank)]
    return all(sum(a[i][j] * weight[j] for j in range(rank)) >= 0 for i in range(rank))


def hull_sigma_t(kind, rank, weights):
    """(sigma, t) from the convex hull of the Weyl orbits: sigma is the least s
    with beta / s in the hull and t the codimension of the face containing it."""
    beta = np.array([sum(r[i] for r in POSITIVE_ROOTS[(kind, rank)]) for i in range(rank)], dtype=float)
    points = sorted({p for w in weights for p in weyl_orbit(kind, rank, w)})
    pts = np.array([[float(x) for x in p] for p in points])
    if rank == 1:
        radius = max(abs(pts[:, 0]))
        return beta[0] / radius, 1
    hull = ConvexHull(pts)
    normals, offsets = hull.equations[:, :-1], hull.equations[:, -1]
    sigma = max(float(n @ beta) / -off for n, off in zip(normals, offsets))
    x = beta / sigma
    tight = [n for n, off in zip(normals, offsets) if abs(n @ x + off) < 1e-9]
    return sigma, int(np.linalg.matrix_rank(np.array(tight), tol=1e-9))


def direct_partial_sums(coeffs):
    out, acc = [], Fraction(0)
    for c in coeffs:
        acc += c
        out.append(acc)
    return out
