"""Exact linear algebra over Q and Z (small dense matrices as lists of lists)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[Fraction]]


def to_fraction_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = to_fraction_matrix(rows)
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1]) if rows else 0


def determinant(rows: Sequence[Sequence]) -> Fraction:
    m = to_fraction_matrix(rows)
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    """Basis of the rational kernel {x : A x = 0}."""
    if not rows:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, pivots = rref(rows)
    n = len(red[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -red[r][f]
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """One solution of A x = b, or None when the system is inconsistent."""
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    n = len(aug[0]) - 1
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for r, p in enumerate(pivots):
        x[p] = red[r][n]
    return x


def inverse(rows: Sequence[Sequence]) -> Matrix:
    n = len(rows)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(rows)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(int(x) // g for x in v)


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Z-basis of {x in Z^n : A x = 0}; this lattice is automatically saturated.

    Works by unimodular column operations on A, tracked on an identity block,
    until A is in column echelon form.
    """
    a = [[int(x) for x in row] for row in rows]
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]  # columns of u track ops

    def col_op(target: int, source: int, factor: int) -> None:
        for row in a:
            row[target] -= factor * row[source]
        for row in u:
            row[target] -= factor * row[source]

    def swap(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in u:
            row[i], row[j] = row[j], row[i]

    lead = 0
    for r in range(len(a)):
        if lead >= ncols:
            break
        while True:
            nonzero = [c for c in range(lead, ncols) if a[r][c] != 0]
            if not nonzero:
                break
            pivot = min(nonzero, key=lambda c: abs(a[r][c]))
            swap(lead, pivot)
            done = True
            for c in range(lead + 1, ncols):
                if a[r][c]:
                    col_op(c, lead, a[r][c] // a[r][lead])
                    if a[r][c]:
                        done = False
            if done:
                lead += 1
                break
    return [[u[i][c] for i in range(ncols)] for c in range(lead, ncols)]


def hermite_row_basis(vectors: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form basis of the lattice spanned by integer vectors."""
    m = [[int(x) for x in v] for v in vectors if any(v)]
    if not m:
        return []
    ncols = len(m[0])
    out: list[list[int]] = []
    r = 0
    for c in range(ncols):
        rows = [i for i in range(r, len(m)) if m[i][c] != 0]
        if not rows:
            continue
        while True:
            rows = [i for i in range(r, len(m)) if m[i][c] != 0]
            piv = min(rows, key=lambda i: abs(m[i][c]))
            m[r], m[piv] = m[piv], m[r]
            others = [i for i in range(r + 1, len(m)) if m[i][c] != 0]
            if not others:
                break
            for i in others:
                f = m[i][c] // m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        if m[r][c] < 0:
            m[r] = [-x for x in m[r]]
        for i in range(r):
            f = m[i][c] // m[r][c]
            m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    out = [row for row in m[:r]]
    return out


Inequality = tuple[list[Fraction], Fraction]  # coeffs . x <= rhs


def _normalise(ineq: Inequality) -> Inequality:
    coeffs, rhs = ineq
    scale = max((abs(c) for c in coeffs), default=Fraction(0))
    if scale == 0:
        return coeffs, rhs
    return [c / scale for c in coeffs], rhs / scale


def fourier_motzkin(ineqs: Sequence[Inequality], eliminate: Sequence[int]) -> list[Inequality]:
    """Project a system of inequalities by eliminating the listed variables.

    The returned system has the same number of columns; eliminated columns are zero.
    """
    system = [_normalise(([Fraction(c) for c in a], Fraction(b))) for a, b in ineqs]
    for var in eliminate:
        pos = [s for s in system if s[0][var] > 0]
        neg = [s for s in system if s[0][var] < 0]
        new = [s for s in system if s[0][var] == 0]
        for pa, pb in pos:
            for na, nb in neg:
                fp, fn = pa[var], -na[var]
                coeffs = [fn * x + fp * y for x, y in zip(pa, na)]
                coeffs[var] = Fraction(0)
                new.append(_normalise((coeffs, fn * pb + fp * nb)))
        seen: dict[tuple, Inequality] = {}
        for coeffs, rhs in new:
            key = tuple(coeffs)
            if key not in seen or rhs < seen[key][1]:
                seen[key] = (coeffs, rhs)
        system = list(seen.values())
    return system


def feasible(ineqs: Sequence[Inequality], nvars: int) -> bool:
    """Exact feasibility of {x : a.x <= b for every row} by full elimination."""
    reduced = fourier_motzkin(ineqs, range(nvars))
    return all(rhs >= 0 for _, rhs in reduced)
