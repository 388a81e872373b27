"""Dense linear algebra over Q using :class:`fractions.Fraction`.

Matrices are lists of rows.  Every routine copies its input.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Matrix = list[list[Fraction]]


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    m = [[Fraction(x) for x in row] for row in rows]
    if m and any(len(row) != len(m[0]) for row in m):
        raise ValueError("ragged matrix")
    return m


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(n: int, m: int | None = None) -> Matrix:
    return [[Fraction(0)] * (n if m is None else m) for _ in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matadd(a: Matrix, b: Matrix, scale=1) -> Matrix:
    return [[x + scale * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scalar_shift(a: Matrix, c) -> Matrix:
    """``a + c*I``."""
    out = [row[:] for row in a]
    for i in range(len(out)):
        out[i][i] += c
    return out


def matpow(a: Matrix, k: int) -> Matrix:
    result = identity(len(a))
    base = [row[:] for row in a]
    while k:
        if k & 1:
            result = matmul(result, base)
        k >>= 1
        if k:
            base = matmul(base, base)
    return result


def poly_of_matrix(coeffs: Sequence[Fraction], a: Matrix) -> Matrix:
    """Evaluate a polynomial (coefficients highest degree first) at ``a`` by Horner."""
    n = len(a)
    result = zeros(n)
    for c in coeffs:
        result = scalar_shift(matmul(result, a), c)
    return result


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [row[:] for row in a]
    if not m:
        return m, []
    n_rows, n_cols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        p = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return m, pivots


def rank(a: Matrix) -> int:
    """Rank by fraction-free forward elimination."""
    m = [row[:] for row in a]
    if not m:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    r = 0
    for c in range(n_cols):
        p = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        for i in range(r + 1, n_rows):
            if m[i][c] != 0:
                f = m[i][c] / piv
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == n_rows:
            break
    return r


def nullspace(a: Matrix) -> list[list[Fraction]]:
    """Basis of ``{x : a x = 0}``, one vector per free column."""
    if not a:
        return []
    n_cols = len(a[0])
    r, pivots = rref(a)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for row, pc in zip(r, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(a: Matrix, b: Sequence[Fraction]) -> list[Fraction] | None:
    """One solution of ``a x = b`` (free variables set to 0), or None."""
    n_cols = len(a[0]) if a else 0
    aug = [row[:] + [Fraction(bi)] for row, bi in zip(a, b)]
    r, pivots = rref(aug)
    if n_cols in pivots:
        return None
    x = [Fraction(0)] * n_cols
    for row, pc in zip(r, pivots):
        x[pc] = row[n_cols]
    return x


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [row[:] + e for row, e in zip(a, identity(n))]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in r]


def primitive_integer_vector(v: Sequence[Fraction]) -> list[int]:
    """Scale a rational vector to coprime integers, keeping its direction."""
    den = 1
    for x in v:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g else ints
