"""Roots of rational polynomials by Aberth-Ehrlich simultaneous iteration.

The polynomial is first split into square-free parts, so every iteration
runs on simple roots and multiplicities are exact.  Each returned root
carries an inclusion radius ``deg * (|g(z)| + eval_err) / |g'(z)|``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from ..qspan.field import to_fraction
from . import poly as P

MAX_ITER = 1000


@dataclass(frozen=True)
class Root:
    value: mpmath.mpc
    multiplicity: int
    radius: mpmath.mpf
    factor: P.Poly  # square-free factor the root belongs to

    @property
    def is_real(self) -> bool:
        return self.value.imag == 0


def _horner(coeffs, z):
    """``p(z)``, ``p'(z)`` and ``sum |a_i| |z|^i``."""
    p = mpmath.mpc(0)
    dp = mpmath.mpc(0)
    mag = mpmath.mpf(0)
    az = abs(z)
    for c in coeffs:
        dp = dp * z + p
        p = p * z + c
        mag = mag * az + abs(c)
    return p, dp, mag


def _aberth(coeffs: list[mpmath.mpf], bits: int) -> list[mpmath.mpc]:
    n = len(coeffs) - 1
    if n == 1:
        return [mpmath.mpc(-coeffs[1] / coeffs[0])]
    lead = coeffs[0]
    # Fujiwara bound for the root moduli
    bound = 2 * max(abs(coeffs[i] / lead) ** (mpmath.mpf(1) / i) for i in range(1, n + 1))
    centre = -coeffs[1] / (n * lead)
    rho = max(bound / 2, mpmath.mpf(1) / 2)
    zs = [
        centre + rho * mpmath.expjpi(mpmath.mpf(2 * k) / n + mpmath.mpf(1) / (2 * n) + mpmath.mpf("0.1"))
        for k in range(n)
    ]
    eps = mpmath.ldexp(1, -bits)
    settled = 0
    for _ in range(MAX_ITER):
        biggest = mpmath.mpf(0)
        for k in range(n):
            z = zs[k]
            p, dp, _ = _horner(coeffs, z)
            if p == 0:
                continue
            if dp == 0:
                zs[k] = z + eps * (1 + abs(z)) * mpmath.mpc(1, 1)
                biggest = mpmath.inf
                continue
            ratio = p / dp
            s = mpmath.fsum(1 / (z - zs[j]) for j in range(n) if j != k)
            w = ratio / (1 - ratio * s)
            zs[k] = z - w
            biggest = max(biggest, abs(w) / max(1, abs(zs[k])))
        if biggest < eps:
            settled += 1
            if settled >= 2:
                break
        else:
            settled = 0
    return zs


def _enforce_conjugates(zs: list[mpmath.mpc], radii: list[mpmath.mpf]) -> list[mpmath.mpc]:
    out = list(zs)
    used = [False] * len(zs)
    for i, z in enumerate(zs):
        if used[i]:
            continue
        if abs(z.imag) <= radii[i]:
            out[i] = mpmath.mpc(z.real, 0)
            used[i] = True
            continue
        cands = [j for j in range(len(zs)) if j != i and not used[j]]
        j = min(cands, key=lambda j: abs(zs[j] - mpmath.conj(z)))
        avg = (z + mpmath.conj(zs[j])) / 2
        out[i], out[j] = avg, mpmath.conj(avg)
        used[i] = used[j] = True
    return out


def _factor_roots(g: P.Poly, multiplicity: int, precision_bits: int) -> list[Root]:
    work = precision_bits + 32
    with mp.workprec(work):
        coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in g]
        zs = _aberth(coeffs, precision_bits + 8)
        n = len(coeffs) - 1
        unit = mpmath.ldexp(1, -work)
        radii = []
        for z in zs:
            p, dp, mag = _horner(coeffs, z)
            err = 2 * (n + 1) * unit * mag
            radii.append(n * (abs(p) + err) / abs(dp) if dp != 0 else mpmath.inf)
        zs = _enforce_conjugates(zs, radii)
        return [Root(+z, multiplicity, +r, g) for z, r in zip(zs, radii)]


def poly_roots(poly: P.Poly, precision_bits: int = 128) -> list[Root]:
    """All complex roots of a nonzero rational polynomial, with multiplicities.

    Real roots have imaginary part exactly 0; non-real roots come in exact
    conjugate pairs.  Sorted by (real part, imaginary part).
    """
    poly = P.trim(poly)
    if P.is_zero(poly):
        raise ValueError("the zero polynomial has no finite root set")
    if P.degree(poly) < 1:
        raise ValueError("polynomial degree must be at least 1")
    roots: list[Root] = []
    for g, e in P.square_free_decomposition(poly):
        roots.extend(_factor_roots(g, e, precision_bits))
    roots.sort(key=lambda r: (r.value.real, r.value.imag))
    return roots


def rationalize(x: mpmath.mpf, max_den: int = 10**12) -> Fraction:
    return to_fraction(mpmath.mpf(x)).limit_denominator(max_den)
