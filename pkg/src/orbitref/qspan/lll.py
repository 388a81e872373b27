"""Lenstra-Lenstra-Lovasz reduction in exact integer arithmetic.

Gram-Schmidt data is kept as the integers ``d_i`` (leading Gram minors) and
``lam[k][j] = d_j * mu_kj``, so the only divisions are exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class DependentRowsError(ValueError):
    pass


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(u, v))


def lll_reduce(
    basis: Sequence[Sequence[int]], delta: Fraction | float | str = Fraction(3, 4)
) -> list[list[int]]:
    """Return an LLL-reduced basis of the lattice spanned by the rows of ``basis``.

    ``delta`` must lie strictly between 1/4 and 1.  Rows must be linearly
    independent; otherwise :class:`DependentRowsError` is raised.
    """
    delta = Fraction(delta) if not isinstance(delta, float) else Fraction(delta).limit_denominator(10**9)
    if not Fraction(1, 4) < delta < 1:
        raise ValueError("delta must lie in (1/4, 1)")
    p, q = delta.numerator, delta.denominator

    n = len(basis)
    if n == 0:
        return []
    width = len(basis[0])
    if any(len(row) != width for row in basis):
        raise ValueError("ragged basis")
    if n > width:
        raise DependentRowsError("more rows than columns")

    # 1-based storage keeps the recurrences readable.
    b: list[list[int]] = [[]] + [[int(x) for x in row] for row in basis]
    d = [0] * (n + 1)
    lam = [[0] * (n + 1) for _ in range(n + 1)]
    d[0] = 1
    d[1] = _dot(b[1], b[1])
    if d[1] == 0:
        raise DependentRowsError("zero row")

    def red(k: int, l: int) -> None:
        if 2 * abs(lam[k][l]) > d[l]:
            r = (2 * lam[k][l] + d[l]) // (2 * d[l])
            b[k] = [x - r * y for x, y in zip(b[k], b[l])]
            lam[k][l] -= r * d[l]
            for i in range(1, l):
                lam[k][i] -= r * lam[l][i]

    def swap(k: int, kmax: int) -> None:
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(1, k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        big = (d[k - 2] * d[k] + lm * lm) // d[k - 1]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k] * lam[i][k - 1] - lm * t) // d[k - 1]
            lam[i][k - 1] = (big * t + lm * lam[i][k]) // d[k]
        d[k - 1] = big

    k, kmax = 2, 1
    while k <= n:
        if k > kmax:
            kmax = k
            for j in range(1, k + 1):
                u = _dot(b[k], b[j])
                for i in range(1, j):
                    u = (d[i] * u - lam[k][i] * lam[j][i]) // d[i - 1]
                if j < k:
                    lam[k][j] = u
                else:
                    if u == 0:
                        raise DependentRowsError("rows are linearly dependent")
                    d[k] = u
        red(k, k - 1)
        if q * d[k] * d[k - 2] < p * d[k - 1] ** 2 - q * lam[k][k - 1] ** 2:
            swap(k, kmax)
            k = max(2, k - 1)
        else:
            for l in range(k - 2, 0, -1):
                red(k, l)
            k += 1
    return b[1:]
