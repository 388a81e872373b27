"""Integer relations among turns ``alpha_j`` together with the constant 1.

Coefficient vectors follow one convention everywhere: ``(s_1, ..., s_k, c)``
certifies ``sum(s_j * alpha_j) + c == 0``.  In the ``sum s_j alpha_j = t``
reading, ``t = -c`` (see :attr:`RelationCertificate.t`).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Sequence

import mpmath
from mpmath import mp

from ..config import GUARD_BITS
from . import linalg
from .field import ExactReal, common_basis, to_fraction
from .lll import lll_reduce


class Certainty(str, Enum):
    EXACT = "exact"
    HEURISTIC = "heuristic"


class RelationKind(str, Enum):
    FOUND = "found"
    NONE_UP_TO_HEIGHT = "none-up-to-height"


@dataclass(frozen=True)
class RelationCertificate:
    kind: RelationKind
    coefficients: tuple[int, ...] | None
    residual: mpmath.mpf | None
    height_bound: int | None
    certainty: Certainty
    precision_bits: int | None = None

    def __post_init__(self):
        if self.kind is RelationKind.FOUND:
            if not self.coefficients or not any(self.coefficients):
                raise ValueError("a found relation needs a nonzero coefficient vector")
            if self.certainty is Certainty.EXACT and self.residual != 0:
                raise ValueError("exact relations have zero residual")

    @property
    def found(self) -> bool:
        return self.kind is RelationKind.FOUND

    @property
    def s(self) -> tuple[int, ...] | None:
        return None if self.coefficients is None else self.coefficients[:-1]

    @property
    def t(self) -> int | None:
        return None if self.coefficients is None else -self.coefficients[-1]

    @property
    def height(self) -> int | None:
        return None if self.coefficients is None else max(abs(c) for c in self.coefficients)


@dataclass(frozen=True)
class SpanMembership:
    member: bool
    coefficients: tuple[Fraction, ...] | None  # (c_0 for 1, c_1, ..., c_n)
    certainty: Certainty = Certainty.EXACT


def _canonical_sign(v: Sequence[int]) -> tuple[int, ...]:
    lead = next((x for x in v if x), 0)
    return tuple(-x for x in v) if lead < 0 else tuple(v)


# ---------------------------------------------------------------- exact tier


def span_membership(target: ExactReal, family: Sequence[ExactReal]) -> SpanMembership:
    """Decide ``target in span_Q({1} + family)`` exactly."""
    basis = common_basis([target, *family])
    dim = len(basis)
    one = [Fraction(int(i == 0)) for i in range(dim)]
    columns = [one] + [list(f.coords) for f in family]
    a = [[col[i] for col in columns] for i in range(dim)]
    x = linalg.solve(a, target.coords)
    if x is None:
        return SpanMembership(False, None)
    return SpanMembership(True, tuple(x))


def _relation_matrix(alphas: Sequence[ExactReal]) -> linalg.Matrix:
    basis = common_basis(alphas)
    dim = len(basis)
    columns = [list(a.coords) for a in alphas] + [[Fraction(int(i == 0)) for i in range(dim)]]
    return [[col[i] for col in columns] for i in range(dim)]


def relation_lattice_basis(alphas: Sequence[ExactReal]) -> list[list[int]]:
    """Integer vectors spanning (over Q) all relations ``sum s_j alpha_j + c = 0``."""
    if not alphas:
        raise ValueError("at least one value is required")
    kernel = linalg.nullspace(_relation_matrix(alphas))
    return [linalg.primitive_integer_vector(v) for v in kernel]


def integer_relation(alphas: Sequence[ExactReal]) -> RelationCertificate:
    """Some exact relation (any support), reduced to a short vector."""
    vectors = relation_lattice_basis(alphas)
    if not vectors:
        return RelationCertificate(
            RelationKind.NONE_UP_TO_HEIGHT, None, None, None, Certainty.EXACT
        )
    if len(vectors) > 1:
        vectors = lll_reduce(vectors)
    best = min(vectors, key=lambda v: (sum(x * x for x in v), v))
    return RelationCertificate(
        RelationKind.FOUND, _canonical_sign(best), mpmath.mpf(0), None, Certainty.EXACT
    )


def _weight_vectors(r: int, start: int = 16) -> Iterator[tuple[int, ...]]:
    """Weights in ``1..W``; ``W`` doubles after each exhausted shell."""
    lo, hi = 0, start
    while True:
        for w in itertools.product(range(1, hi + 1), repeat=r):
            if max(w) > lo:
                yield w
        lo, hi = hi, 2 * hi


def full_support_combination(
    vectors: Sequence[Sequence[int]], k: int, start_weight: int = 16
) -> tuple[int, ...] | None:
    """Integer combination whose first ``k`` coordinates are all nonzero.

    Returns None when some coordinate vanishes on every vector (no
    combination can work).  Otherwise terminates: for each coordinate the
    bad weights form a proper sublattice.
    """
    if not vectors:
        return None
    for j in range(k):
        if all(v[j] == 0 for v in vectors):
            return None
    r = len(vectors)
    for w in _weight_vectors(r, start_weight):
        combo = [sum(wi * v[i] for wi, v in zip(w, vectors)) for i in range(len(vectors[0]))]
        if all(combo[j] for j in range(k)):
            g = 0
            for x in combo:
                g = math.gcd(g, x)
            return _canonical_sign([x // g for x in combo])
    return None  # unreachable


def full_support_relation(alphas: Sequence[ExactReal], start_weight: int = 16) -> RelationCertificate:
    """Nonzero integers ``s_j`` and an integer ``t`` with ``sum s_j alpha_j = t``, if any."""
    k = len(alphas)
    vectors = relation_lattice_basis(alphas)
    combo = full_support_combination(vectors, k, start_weight)
    if combo is None:
        return RelationCertificate(
            RelationKind.NONE_UP_TO_HEIGHT, None, None, None, Certainty.EXACT
        )
    return RelationCertificate(RelationKind.FOUND, combo, mpmath.mpf(0), None, Certainty.EXACT)


def verify_exact(alphas: Sequence[ExactReal], coefficients: Sequence[int]) -> bool:
    """True iff ``sum s_j alpha_j + c`` vanishes coordinatewise."""
    *s, c = coefficients
    total = alphas[0].basis.rational(c)
    for sj, a in zip(s, alphas):
        total = total + a * sj
    return total.is_zero


# -------------------------------------------------------------- numeric tier


def _to_mpf(x) -> mpmath.mpf:
    if isinstance(x, ExactReal):
        return x.value()
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, str):
        return mpmath.mpf(x)
    v = mpmath.mpf(x)
    return v


def _numeric_values(alphas, working_bits: int) -> list[mpmath.mpf]:
    with mp.workprec(working_bits):
        values = [_to_mpf(a) for a in alphas]
    for v in values:
        if not mpmath.isfinite(v):
            raise ValueError("non-finite input to relation detection")
    return values


def _check_numeric_args(k: int, height_bound: int, precision_bits: int) -> None:
    if k < 1:
        raise ValueError("at least one value is required")
    if height_bound < 1:
        raise ValueError("height_bound must be at least 1")
    if precision_bits < 16:
        raise ValueError("precision_bits must be at least 16")


def _reduced_relation_rows(values: Sequence[mpmath.mpf], precision_bits: int) -> list[list[int]]:
    """LLL-reduce the lattice ``e_i (+) round(2^p * x_i)`` for ``x = (alpha..., 1)``."""
    xs = list(values) + [mpmath.mpf(1)]
    n = len(xs)
    with mp.workprec(precision_bits + 2 * GUARD_BITS):
        scaled = [int(mpmath.nint(mpmath.ldexp(x, precision_bits))) for x in xs]
    rows = [[int(i == j) for j in range(n)] + [scaled[i]] for i in range(n)]
    return lll_reduce(rows)


def _residual(values: Sequence[mpmath.mpf], coeffs: Sequence[int], bits: int) -> mpmath.mpf:
    with mp.workprec(bits):
        return abs(mpmath.fsum(c * v for c, v in zip(coeffs[:-1], values)) + coeffs[-1])


def numeric_relation_basis(
    alphas: Sequence, height_bound: int, precision_bits: int
) -> list[tuple[tuple[int, ...], mpmath.mpf]]:
    """Every reduced lattice row that passes the residual and height tests."""
    _check_numeric_args(len(alphas), height_bound, precision_bits)
    work = precision_bits + 2 * GUARD_BITS
    values = _numeric_values(alphas, work)
    threshold = mpmath.ldexp(1, -(precision_bits // 2))
    passing = []
    for row in _reduced_relation_rows(values, precision_bits):
        coeffs = tuple(row[:-1])
        if not any(coeffs) or max(abs(c) for c in coeffs) > height_bound:
            continue
        res = _residual(values, coeffs, work)
        if res < threshold:
            passing.append((_canonical_sign(coeffs), res))
    return passing


def detect_relation_numeric(
    alphas: Sequence, height_bound: int, precision_bits: int
) -> RelationCertificate:
    """Heuristic relation ``sum s_j alpha_j + c = 0`` among numeric reals.

    The shortest LLL-reduced vector of the scaled relation lattice is
    accepted when its residual is below ``2**(-precision_bits/2)`` and every
    coefficient is at most ``height_bound`` in absolute value.
    """
    _check_numeric_args(len(alphas), height_bound, precision_bits)
    work = precision_bits + 2 * GUARD_BITS
    values = _numeric_values(alphas, work)
    rows = _reduced_relation_rows(values, precision_bits)
    shortest = min(rows, key=lambda r: sum(x * x for x in r))
    coeffs = tuple(shortest[:-1])
    threshold = mpmath.ldexp(1, -(precision_bits // 2))
    if any(coeffs) and max(abs(c) for c in coeffs) <= height_bound:
        res = _residual(values, coeffs, work)
        if res < threshold:
            return RelationCertificate(
                RelationKind.FOUND,
                _canonical_sign(coeffs),
                res,
                height_bound,
                Certainty.HEURISTIC,
                precision_bits,
            )
    return RelationCertificate(
        RelationKind.NONE_UP_TO_HEIGHT, None, None, height_bound, Certainty.HEURISTIC, precision_bits
    )


def numeric_span_memberships(
    alphas: Sequence, height_bound: int, precision_bits: int
) -> tuple[list[SpanMembership], RelationCertificate]:
    """Heuristic ``alpha_j in span_Q({1} + others)`` for every j, plus a full-support certificate."""
    passing = numeric_relation_basis(alphas, height_bound, precision_bits)
    vectors = [v for v, _ in passing]
    k = len(alphas)
    memberships = []
    for j in range(k):
        vec = next((v for v in vectors if v[j] != 0), None)
        if vec is None:
            memberships.append(SpanMembership(False, None, Certainty.HEURISTIC))
            continue
        # alpha_j = -(c + sum_{i != j} s_i alpha_i) / s_j
        sj = Fraction(vec[j])
        coeffs = [Fraction(-vec[-1]) / sj] + [
            Fraction(-vec[i]) / sj for i in range(k) if i != j
        ]
        memberships.append(SpanMembership(True, tuple(coeffs), Certainty.HEURISTIC))
    combo = full_support_combination(vectors, k)
    if combo is not None and max(abs(c) for c in combo) <= height_bound:
        work = precision_bits + 2 * GUARD_BITS
        values = _numeric_values(alphas, work)
        cert = RelationCertificate(
            RelationKind.FOUND,
            combo,
            _residual(values, combo, work),
            height_bound,
            Certainty.HEURISTIC,
            precision_bits,
        )
    else:
        cert = RelationCertificate(
            RelationKind.NONE_UP_TO_HEIGHT, None, None, height_bound, Certainty.HEURISTIC, precision_bits
        )
    return memberships, cert


# ------------------------------------------------------------ moment curve


def moment_curve_rank(points: Sequence, n: int) -> int:
    """Exact rank of the vectors ``(1, x, ..., x^(n-1))`` for the given points."""
    pts = [to_fraction(x) for x in points]
    if n < 1 or len(pts) != n:
        raise ValueError("need exactly n >= 1 points")
    if len(set(pts)) != n:
        raise ValueError("points must be pairwise distinct")
    rows = [[x**i for i in range(n)] for x in pts]
    return linalg.rank(rows)
