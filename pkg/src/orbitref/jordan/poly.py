"""Polynomials over Q as tuples of Fractions, highest degree first."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from ..qspan import linalg

Poly = tuple[Fraction, ...]


def trim(p: Sequence) -> Poly:
    coeffs = [Fraction(c) for c in p]
    i = 0
    while i < len(coeffs) - 1 and coeffs[i] == 0:
        i += 1
    return tuple(coeffs[i:]) if coeffs else (Fraction(0),)


def degree(p: Poly) -> int:
    p = trim(p)
    return -1 if p == (0,) else len(p) - 1


def is_zero(p: Poly) -> bool:
    return all(c == 0 for c in p)


def monic(p: Poly) -> Poly:
    p = trim(p)
    lead = p[0]
    return tuple(c / lead for c in p)


def deriv(p: Poly) -> Poly:
    p = trim(p)
    n = len(p) - 1
    if n == 0:
        return (Fraction(0),)
    return tuple(c * (n - i) for i, c in enumerate(p[:-1]))


def evaluate(p: Poly, x):
    acc = 0
    for c in p:
        acc = acc * x + c
    return acc


def mul(p: Poly, q: Poly) -> Poly:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def power(p: Poly, k: int) -> Poly:
    out: Poly = (Fraction(1),)
    for _ in range(k):
        out = mul(out, p)
    return out


def divmod_(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    p, q = list(trim(p)), trim(q)
    if is_zero(q):
        raise ZeroDivisionError("polynomial division by zero")
    dq = len(q) - 1
    if len(p) - 1 < dq:
        return (Fraction(0),), trim(p)
    quot = [Fraction(0)] * (len(p) - dq)
    for i in range(len(quot)):
        f = p[i] / q[0]
        quot[i] = f
        if f:
            for j, c in enumerate(q):
                p[i + j] -= f * c
    rem = p[len(quot):]
    return trim(quot), trim(rem or [0])


def divides(q: Poly, p: Poly) -> bool:
    return is_zero(divmod_(p, q)[1])


def poly_gcd(p: Poly, q: Poly) -> Poly:
    a, b = trim(p), trim(q)
    while not is_zero(b):
        a, b = b, divmod_(a, b)[1]
    if is_zero(a):
        return a
    return monic(a)


def square_free_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: monic square-free coprime ``a_i`` with ``p ~ prod a_i**i``."""
    p = monic(p)
    if degree(p) < 1:
        return []
    dp = deriv(p)
    a0 = poly_gcd(p, dp)
    b = divmod_(p, a0)[0]
    c = divmod_(dp, a0)[0]
    d = trim(sub(c, deriv(b)))
    out = []
    i = 1
    while degree(b) > 0:
        a = poly_gcd(b, d)
        b = divmod_(b, a)[0]
        c = divmod_(d, a)[0]
        d = trim(sub(c, deriv(b)))
        if degree(a) > 0:
            out.append((monic(a), i))
        i += 1
    return out


def sub(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    p = (Fraction(0),) * (n - len(p)) + tuple(p)
    q = (Fraction(0),) * (n - len(q)) + tuple(q)
    return tuple(a - b for a, b in zip(p, q))


def char_poly(matrix: Sequence[Sequence]) -> Poly:
    """Characteristic polynomial ``det(xI - A)`` by the Faddeev-LeVerrier recursion."""
    a = linalg.as_matrix(matrix)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    if n == 0:
        return (Fraction(1),)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)  # ascending storage during the recursion
    m = linalg.zeros(n)
    for k in range(1, n + 1):
        m = linalg.scalar_shift(linalg.matmul(a, m), coeffs[n - k + 1])
        am = linalg.matmul(a, m)
        coeffs[n - k] = -sum((am[i][i] for i in range(n)), Fraction(0)) / k
    return tuple(reversed(coeffs))


_CYCLOTOMIC: dict[int, Poly] = {}


def cyclotomic(q: int) -> Poly:
    """``Phi_q`` by dividing ``x^q - 1`` by ``Phi_d`` for the proper divisors d."""
    if q in _CYCLOTOMIC:
        return _CYCLOTOMIC[q]
    num: Poly = trim([1] + [0] * (q - 1) + [-1])
    for d in range(1, q):
        if q % d == 0:
            num = divmod_(num, cyclotomic(d))[0]
    _CYCLOTOMIC[q] = num
    return num


def totient(q: int) -> int:
    return sum(1 for k in range(1, q + 1) if gcd(k, q) == 1)
