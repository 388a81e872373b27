"""Real Jordan structure: splitting blocks ``J_m(lambda)`` and rotation blocks ``J_m(r R_theta)``.

Two input tiers exist.  Rational matrices (and explicit block lists) give an
``exact`` structure: multiplicities come from an exact square-free
factorisation and, whenever the eigenvalue's minimal polynomial is found
(rational root, rational quadratic, cyclotomic), from exact rank sequences.
Float matrices give a ``numeric`` structure built from root clustering and
singular-value rank decisions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence, Union

import mpmath
import numpy as np
from mpmath import mp

from ..qspan import linalg
from ..qspan.field import ExactReal, IrrationalBasis, mp_str, to_fraction
from . import poly as P
from .roots import poly_roots, rationalize

Number = Union[Fraction, mpmath.mpf]
Angle = Union[ExactReal, mpmath.mpf]

HALF = Fraction(1, 2)


class Kind(str, Enum):
    SPLIT = "split"
    ROTATION = "rotation"


class Source(str, Enum):
    EXACT = "exact"
    NUMERIC = "numeric"


class StructureError(ValueError):
    """Raised when a rank profile does not yield a valid partition."""

    def __init__(self, message: str, rank_sequences: list | None = None):
        super().__init__(message)
        self.rank_sequences = rank_sequences or []


def _as_mpf(x) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, ExactReal):
        return x.value()
    if isinstance(x, mpmath.mpf):
        return x  # keep the stored precision
    return mpmath.mpf(x)


@dataclass(frozen=True)
class JordanBlock:
    size: int
    kind: Kind
    value: Number  # eigenvalue of a split block, radius of a rotation block
    angle: Angle | None = None  # turns, strictly inside (0, 1/2)
    modulus_sq: Fraction | None = None  # exact |eigenvalue|^2 when known
    angle_err: float = 0.0

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("block size must be positive")
        if self.kind is Kind.SPLIT:
            if self.angle is not None:
                raise ValueError("split blocks carry no angle")
            if self.modulus_sq is None and isinstance(self.value, Fraction):
                object.__setattr__(self, "modulus_sq", self.value * self.value)
            return
        if not _as_mpf(self.value) > 0:
            raise ValueError("rotation radius must be positive")
        if self.modulus_sq is None and isinstance(self.value, Fraction):
            object.__setattr__(self, "modulus_sq", self.value * self.value)
        a = self.angle
        if a is None:
            raise ValueError("rotation blocks need an angle")
        if isinstance(a, ExactReal) and a.is_rational:
            ok = 0 < a.rational_part < HALF
        else:
            v = _as_mpf(a)
            ok = 0 < v < 0.5
        if not ok:
            raise ValueError(
                "rotation angle must lie strictly inside (0, 1/2) turns; "
                "angles 0 and 1/2 are splitting blocks"
            )

    @classmethod
    def split(cls, size: int, eigenvalue, *, modulus_sq=None) -> "JordanBlock":
        if not isinstance(eigenvalue, mpmath.mpf):
            eigenvalue = to_fraction(eigenvalue)
        return cls(size, Kind.SPLIT, eigenvalue, modulus_sq=modulus_sq)

    @classmethod
    def rotation(cls, size: int, radius, angle, *, modulus_sq=None, angle_err: float = 0.0) -> "JordanBlock":
        if not isinstance(radius, mpmath.mpf):
            radius = to_fraction(radius)
        if isinstance(angle, (Fraction, int, str)):
            angle = IrrationalBasis.rationals().rational(angle)
        elif isinstance(angle, float):
            angle = mpmath.mpf(angle)
        return cls(size, Kind.ROTATION, radius, angle, modulus_sq, angle_err)

    @property
    def is_rotation(self) -> bool:
        return self.kind is Kind.ROTATION

    @property
    def real_dim(self) -> int:
        return 2 * self.size if self.is_rotation else self.size

    @property
    def modulus(self) -> mpmath.mpf:
        v = self.value
        if isinstance(v, Fraction):
            with mp.workprec(160):
                return +_as_mpf(abs(v))
        v = _as_mpf(v)
        return -v if v < 0 else v

    @property
    def angle_is_exact(self) -> bool:
        return isinstance(self.angle, ExactReal)

    @property
    def angle_value(self) -> mpmath.mpf | None:
        return None if self.angle is None else _as_mpf(self.angle)

    def scaled(self, c) -> "JordanBlock":
        """Block of ``c*T`` for ``c > 0``."""
        c_exact = c if isinstance(c, mpmath.mpf) else to_fraction(c)
        if not _as_mpf(c_exact) > 0:
            raise ValueError("scale must be positive")
        value = self.value * c_exact
        msq = None
        if self.modulus_sq is not None and isinstance(c_exact, Fraction):
            msq = self.modulus_sq * c_exact * c_exact
        return JordanBlock(self.size, self.kind, value, self.angle, msq, self.angle_err)

    def signature(self, digits: int = 6) -> tuple:
        if self.is_rotation:
            return ("rotation", self.size, round(float(self.modulus), digits), round(float(_as_mpf(self.angle)), digits))
        return ("split", self.size, round(float(_as_mpf(self.value)), digits), 0.0)

    def to_json(self) -> dict:
        out: dict = {"size": self.size, "kind": self.kind.value}
        if self.is_rotation:
            out["radius"] = _num_json(self.value)
            out["turns"] = self.angle.to_json() if isinstance(self.angle, ExactReal) else _num_json(self.angle)
            if self.angle_err:
                out["turns_error"] = float(self.angle_err)
        else:
            out["eigenvalue"] = _num_json(self.value)
        if self.modulus_sq is not None:
            out["modulus_sq"] = str(self.modulus_sq)
        return out


def _num_json(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return mp_str(_as_mpf(x), 30)


@dataclass(frozen=True)
class JordanStructure:
    blocks: tuple[JordanBlock, ...]
    source: Source
    tolerance: float | None = None
    diagnostics: tuple = field(default=(), compare=False)
    dimension: int = field(init=False)
    spectral_radius: mpmath.mpf = field(init=False, compare=False)
    spectral_radius_sq: Fraction | None = field(init=False, compare=False)

    def __post_init__(self):
        blocks = tuple(self.blocks)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "dimension", sum(b.real_dim for b in blocks))
        if not blocks:
            object.__setattr__(self, "spectral_radius", mpmath.mpf(0))
            object.__setattr__(self, "spectral_radius_sq", Fraction(0))
            return
        object.__setattr__(self, "spectral_radius", max(b.modulus for b in blocks))
        if all(b.modulus_sq is not None for b in blocks):
            object.__setattr__(self, "spectral_radius_sq", max(b.modulus_sq for b in blocks))
        else:
            object.__setattr__(self, "spectral_radius_sq", None)

    @property
    def is_exact(self) -> bool:
        return self.source is Source.EXACT

    def signature(self, digits: int = 6) -> list[tuple]:
        return sorted(b.signature(digits) for b in self.blocks)

    def scaled(self, c) -> "JordanStructure":
        return JordanStructure(tuple(b.scaled(c) for b in self.blocks), self.source, self.tolerance, self.diagnostics)

    def to_json(self) -> dict:
        return {
            "blocks": [b.to_json() for b in self.blocks],
            "dimension": self.dimension,
            "spectral_radius": mp_str(self.spectral_radius, 30),
            "source": self.source.value,
            "tolerance": self.tolerance,
            "diagnostics": list(self.diagnostics),
        }


# ---------------------------------------------------------------- exact tier


def from_blocks(specs: Sequence) -> JordanStructure:
    """Exact structure from ``("split", size, value)`` / ``("rotation", size, radius, turns)`` entries.

    Turns are reduced to a representative in ``[0, 1/2]``; a rotation at 0
    or 1/2 turns becomes two splitting blocks of eigenvalue ``+r`` or ``-r``.
    """
    blocks: list[JordanBlock] = []
    for spec in specs:
        if isinstance(spec, JordanBlock):
            blocks.append(spec)
            continue
        kind = spec[0]
        if kind == "split":
            _, size, value = spec
            blocks.append(JordanBlock.split(size, value))
        elif kind in ("rotation", "rot"):
            # optional fifth entry: exact squared radius, needed when the radius is irrational
            _, size, radius, turns, *msq = spec
            msq = to_fraction(msq[0]) if msq and msq[0] is not None else None
            if not isinstance(turns, ExactReal):
                turns = IrrationalBasis.rationals().rational(turns)
            rep = turns.turns_representative()
            if radius is None:
                if msq is None or msq <= 0:
                    raise ValueError("a rotation needs a radius or a positive squared radius")
                r = _sqrt_exact(msq)
            else:
                r = to_fraction(radius)
                if msq is not None and r * r != msq:
                    raise ValueError("radius and squared radius disagree")
            msq = msq if msq is not None else (r * r if isinstance(r, Fraction) else None)
            if rep.is_rational and rep.rational_part in (0, HALF):
                ev = r if rep.rational_part == 0 else -r
                blocks += [JordanBlock.split(size, ev, modulus_sq=msq), JordanBlock.split(size, ev, modulus_sq=msq)]
            else:
                blocks.append(JordanBlock.rotation(size, r, rep, modulus_sq=msq))
        else:
            raise ValueError(f"unknown block kind {kind!r}")
    return JordanStructure(tuple(blocks), Source.EXACT)


def _sqrt_exact(c: Fraction):
    """``sqrt(c)`` as a Fraction when c is a rational square, else a 160-bit mpf."""
    p, q = math.isqrt(c.numerator), math.isqrt(c.denominator)
    if Fraction(p * p, q * q) == c:
        return Fraction(p, q)
    with mp.workprec(160):
        return +mpmath.sqrt(mpmath.mpf(c.numerator) / c.denominator)


def _parse_matrix(matrix) -> tuple[linalg.Matrix, bool]:
    """Exact Fraction copy of the matrix and whether every entry was rational-typed."""
    if isinstance(matrix, np.ndarray):
        exact = matrix.dtype.kind in "iub"
        rows = matrix.tolist()
    else:
        rows = [list(r) for r in matrix]
        exact = True
        for row in rows:
            for x in row:
                if isinstance(x, (float, np.floating)):
                    exact = False
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    try:
        frac = [[to_fraction(float(x) if isinstance(x, np.floating) else x) for x in row] for row in rows]
    except (TypeError, ValueError) as exc:
        raise ValueError(f"unparseable matrix entry: {exc}") from None
    return frac, exact


def char_poly(matrix) -> P.Poly:
    a, _ = _parse_matrix(matrix)
    return P.char_poly(a)


def _mp_rank(m: list[list], rel_tol: mpmath.mpf) -> int:
    """Rank by complete pivoting; pivots below ``rel_tol * max|entry|`` count as zero."""
    a = [list(row) for row in m]
    n_rows = len(a)
    n_cols = len(a[0]) if a else 0
    scale = max((abs(x) for row in a for x in row), default=mpmath.mpf(0))
    if scale == 0:
        return 0
    cutoff = rel_tol * scale
    r = 0
    cols = list(range(n_cols))
    while r < min(n_rows, n_cols):
        best, bi, bj = mpmath.mpf(0), -1, -1
        for i in range(r, n_rows):
            for j in range(r, n_cols):
                v = abs(a[i][cols[j]])
                if v > best:
                    best, bi, bj = v, i, j
        if best <= cutoff:
            break
        a[r], a[bi] = a[bi], a[r]
        cols[r], cols[bj] = cols[bj], cols[r]
        piv = a[r][cols[r]]
        for i in range(r + 1, n_rows):
            f = a[i][cols[r]] / piv
            if f != 0:
                for j in range(r, n_cols):
                    a[i][cols[j]] -= f * a[r][cols[j]]
        r += 1
    return r


def _exact_nullities(m: linalg.Matrix, upto: int, divisor: int) -> list[int]:
    n = len(m)
    out = []
    power = linalg.identity(n)
    for _ in range(upto):
        power = linalg.matmul(power, m)
        nul = n - linalg.rank(power)
        if nul % divisor:
            raise StructureError("nullity not divisible by the factor degree", [out + [nul]])
        out.append(nul // divisor)
    return out


def _mp_nullities(a: linalg.Matrix, z: mpmath.mpc, upto: int, precision_bits: int) -> list[int]:
    n = len(a)
    with mp.workprec(precision_bits + 32):
        m = mpmath.matrix([[mpmath.mpf(x.numerator) / x.denominator for x in row] for row in a])
        m = m - z * mpmath.eye(n)
        power = mpmath.eye(n)
        out = []
        rel = mpmath.ldexp(1, -(precision_bits // 2))
        for _ in range(upto):
            power = power * m
            rows = [[power[i, j] for j in range(n)] for i in range(n)]
            out.append(n - _mp_rank(rows, rel))
    return out


def _partition(nullities: Sequence[int], multiplicity: int, label: str, tol) -> list[int]:
    """Block sizes from the nullity sequence ``dim ker (T - lambda)^j``, j = 1, 2, ..."""
    seq = [0] + list(nullities)
    if seq[-1] != multiplicity:
        raise StructureError(
            f"structure extraction failed at tol={tol}: nullities {list(nullities)} of {label} "
            f"do not reach the algebraic multiplicity {multiplicity}",
            [{"eigenvalue": label, "nullities": list(nullities)}],
        )
    at_least = [seq[j] - seq[j - 1] for j in range(1, len(seq))]
    if any(x < 0 for x in at_least) or any(at_least[j] < at_least[j + 1] for j in range(len(at_least) - 1)):
        raise StructureError(
            f"structure extraction failed at tol={tol}: inconsistent rank profile for {label}",
            [{"eigenvalue": label, "nullities": list(nullities)}],
        )
    at_least.append(0)
    sizes = []
    for j in range(len(at_least) - 1):
        sizes += [j + 1] * (at_least[j] - at_least[j + 1])
    return sorted(sizes, reverse=True)


def _root_of_unity(z: mpmath.mpc, factor: P.Poly, n: int, precision_bits: int):
    """``(k, q)`` with ``z = exp(2 pi i k/q)`` and ``Phi_q | factor``, else None."""
    with mp.workprec(precision_bits + 32):
        if abs(abs(z) - 1) > mpmath.ldexp(1, -(precision_bits // 2)):
            return None
        turns = mpmath.arg(z) / (2 * mpmath.pi)
    turns_q = rationalize(turns, max_den=max(6, 2 * n * n))
    q = turns_q.denominator
    with mp.workprec(precision_bits + 32):
        if abs(turns - mpmath.mpf(turns_q.numerator) / q) > mpmath.ldexp(1, -(precision_bits // 2)):
            return None
    phi = P.cyclotomic(q)
    if P.degree(phi) > P.degree(factor) or not P.divides(phi, factor):
        return None
    return turns_q.numerator, q


# cos^2 of the rational turns in (0, 1/2) with rational cos^2 (Niven): value -> (turn if cos > 0, turn if cos < 0)
_NIVEN_TURNS = {
    Fraction(0): (Fraction(1, 4), Fraction(1, 4)),
    Fraction(1, 4): (Fraction(1, 6), Fraction(1, 3)),
    Fraction(1, 2): (Fraction(1, 8), Fraction(3, 8)),
    Fraction(3, 4): (Fraction(1, 12), Fraction(5, 12)),
}


def _quadratic_rational_turn(re: Fraction, modulus_sq: Fraction) -> Fraction | None:
    """Exact turn of a root of ``x^2 - 2 re x + modulus_sq`` when that turn is rational."""
    hit = _NIVEN_TURNS.get(re * re / modulus_sq)
    if hit is None:
        return None
    return hit[0] if re >= 0 else hit[1]


def _extract_exact(a: linalg.Matrix, precision_bits: int, tol) -> JordanStructure:
    n = len(a)
    roots = poly_roots(P.char_poly(a), precision_bits)
    blocks: list[JordanBlock] = []
    diag = []
    angle_err = float(mpmath.ldexp(1, -(precision_bits - 8)))
    for root in roots:
        z, mult, g = root.value, root.multiplicity, root.factor
        if z.imag < 0:
            continue
        if z.imag == 0:
            lam = rationalize(z.real)
            msq = None
            if P.evaluate(g, lam) == 0:
                nul = _exact_nullities(linalg.scalar_shift(a, -lam), mult, 1)
                method, value = "exact-linear", lam
            else:
                nul = _mp_nullities(a, z, mult, precision_bits)
                method, value = "high-precision", +z.real
                c_q = rationalize(z.real * z.real)
                if P.divides((Fraction(1), Fraction(0), -c_q), g):
                    msq = c_q
            sizes = _partition(nul, mult, _num_json(value), tol)
            blocks += [JordanBlock.split(s, value, modulus_sq=msq) for s in sizes]
            diag.append({"eigenvalue": _num_json(value), "multiplicity": mult, "nullities": nul, "method": method})
            continue

        unity = _root_of_unity(z, g, n, precision_bits)
        label = f"{mpmath.nstr(z.real, 20)}+{mpmath.nstr(z.imag, 20)}i"
        if unity is not None:
            k, q = unity
            phi = P.cyclotomic(q)
            nul = _exact_nullities(linalg.poly_of_matrix(phi, a), mult, P.totient(q))
            sizes = _partition(nul, mult, label, tol)
            angle = IrrationalBasis.rationals().rational(Fraction(k, q))
            blocks += [JordanBlock.rotation(s, Fraction(1), angle, modulus_sq=Fraction(1)) for s in sizes]
            diag.append({"eigenvalue": label, "multiplicity": mult, "nullities": nul, "method": f"exact-cyclotomic-{q}"})
            continue

        with mp.workprec(precision_bits + 32):
            radius = abs(z)
            turns = mpmath.arg(z) / (2 * mpmath.pi)
        b_q = rationalize(-2 * z.real)
        c_q = rationalize(radius * radius)
        quad = (Fraction(1), b_q, c_q)
        if P.divides(quad, g):
            nul = _exact_nullities(linalg.poly_of_matrix(quad, a), mult, 2)
            method, msq = "exact-quadratic", c_q
            root_c = math.isqrt(c_q.numerator), math.isqrt(c_q.denominator)
            if Fraction(root_c[0] ** 2, root_c[1] ** 2) == c_q:
                radius = Fraction(*root_c)
            exact_turn = _quadratic_rational_turn(-b_q / 2, c_q)
            if exact_turn is not None:
                turns, angle_err = IrrationalBasis.rationals().rational(exact_turn), 0.0
        else:
            nul = _mp_nullities(a, z, mult, precision_bits)
            method, msq = "high-precision", None
        sizes = _partition(nul, mult, label, tol)
        blocks += [
            JordanBlock.rotation(s, radius, turns, modulus_sq=msq, angle_err=angle_err) for s in sizes
        ]
        diag.append({"eigenvalue": label, "multiplicity": mult, "nullities": nul, "method": method})
    structure = JordanStructure(tuple(blocks), Source.EXACT, tol, tuple(diag))
    if structure.dimension != n:
        raise StructureError("block sizes do not sum to the matrix dimension", list(diag))
    return structure


# -------------------------------------------------------------- numeric tier


def _svd_nullities(m: np.ndarray, upto: int, tol: float) -> list[int]:
    """Nullities of ``m^j``; the cutoff ``tol * ||m||^j`` bounds the top singular value of every power."""
    n = m.shape[0]
    out = []
    norm = float(np.linalg.norm(m, 2))
    if norm == 0:
        return [n] * upto
    power = np.eye(n, dtype=m.dtype)
    for j in range(1, upto + 1):
        power = power @ m
        s = np.linalg.svd(power, compute_uv=False)
        out.append(int(np.sum(s <= tol * norm**j)))
    return out


def _single_linkage(points: list[complex], radius: float) -> list[list[int]]:
    parent = list(range(len(points)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if abs(points[i] - points[j]) <= radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(len(points)):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _numeric_cluster(af, points, members, radius, tol, norm):
    """Blocks for one cluster; a cluster whose ranks disagree is re-split at a smaller radius."""
    n = af.shape[0]
    vals = [points[i] for i in members]
    mean = sum(vals) / len(vals)
    mult = len(vals)
    spread = max(abs(v - mean) for v in vals)
    if abs(mean.imag) <= radius:
        lam = mean.real
        nul = _svd_nullities(af - lam * np.eye(n), mult, tol)
        label = repr(lam)
    elif mean.imag > 0:
        nul = _svd_nullities(af.astype(complex) - mean * np.eye(n), mult, tol)
        label = f"{mean.real!r}+{mean.imag!r}i"
    else:
        return [], []
    try:
        sizes = _partition(nul, mult, label, tol)
    except StructureError:
        if mult == 1 or radius < 1e-12 * max(1.0, abs(mean)):
            raise
        blocks, diag = [], []
        for sub in _single_linkage(vals, radius / 8):
            b, d = _numeric_cluster(af, points, [members[i] for i in sub], radius / 8, tol, norm)
            blocks += b
            diag += d
        return blocks, diag
    if abs(mean.imag) <= radius:
        blocks = [JordanBlock.split(s, mpmath.mpf(mean.real)) for s in sizes]
    else:
        rad = abs(mean)
        turns = math.atan2(mean.imag, mean.real) / (2 * math.pi)
        err = max(spread, 1e-13 * max(1.0, norm)) / (2 * math.pi * rad)
        blocks = [JordanBlock.rotation(s, mpmath.mpf(rad), mpmath.mpf(turns), angle_err=err) for s in sizes]
    diag = [{"eigenvalue": label, "multiplicity": mult, "nullities": nul, "method": "svd",
             "spread": spread, "cluster_radius": radius}]
    return blocks, diag


def _extract_numeric(a: linalg.Matrix, tol: float, cluster_tol: float | None, precision_bits: int) -> JordanStructure:
    n = len(a)
    af = np.array([[float(x) for x in row] for row in a])
    roots = poly_roots(P.char_poly(a), precision_bits)
    points: list[complex] = []
    for r in roots:
        points += [complex(r.value)] * r.multiplicity
    scale = max(1.0, max(abs(p) for p in points))
    radius = cluster_tol if cluster_tol is not None else tol ** (1 / 3) * scale
    clusters = _single_linkage(points, radius)
    # deterministic order: by the cluster mean, real part then imaginary part
    clusters.sort(key=lambda c: ((sum(points[i] for i in c) / len(c)).real, (sum(points[i] for i in c) / len(c)).imag))

    blocks: list[JordanBlock] = []
    diag = []
    norm = float(np.linalg.norm(af, 2)) if n else 0.0
    for members in clusters:
        b, d = _numeric_cluster(af, points, members, radius, tol, norm)
        blocks += b
        diag += d
    structure = JordanStructure(tuple(blocks), Source.NUMERIC, radius, tuple(diag))
    if structure.dimension != n:
        raise StructureError(
            f"structure extraction failed at tol={tol}: clusters straddle the real axis or lack mirrors",
            list(diag),
        )
    return structure


def extract_structure(
    matrix,
    tol: float | None = None,
    precision_bits: int = 128,
    cluster_tol: float | None = None,
    max_dim: int = 64,
) -> JordanStructure:
    """Recover the real Jordan structure of a square matrix.

    Rational-typed entries (ints, Fractions, ``"p/q"`` strings) select the
    exact tier; any float selects the numeric tier, where ``tol`` (default
    1e-8) is the relative singular-value cutoff and ``cluster_tol`` (default
    ``tol**(1/3)`` times the root scale) is the single-linkage radius.
    """
    a, exact = _parse_matrix(matrix)
    n = len(a)
    if n == 0:
        raise ValueError("empty matrix")
    if n > max_dim:
        raise ValueError(f"dimension {n} exceeds the configured bound {max_dim}")
    if exact:
        with mp.workprec(precision_bits + 32):
            return _extract_exact(a, precision_bits, tol)
    return _extract_numeric(a, 1e-8 if tol is None else tol, cluster_tol, precision_bits)


# ------------------------------------------------------------ finiteness


@dataclass(frozen=True)
class OrbitFiniteness:
    kind: str  # "power-identity" | "nilpotent" | "infinite"
    period: int | None = None

    def __str__(self) -> str:
        labels = {"power-identity": "PowerIdentity", "nilpotent": "Nilpotent"}
        if self.kind in labels:
            return f"{labels[self.kind]}({self.period})"
        return "Infinite"


def orbit_finiteness(structure: JordanStructure) -> OrbitFiniteness:
    """Whether ``T^N = 0`` or ``T^N = I`` for some N (smallest such N)."""
    if not structure.is_exact:
        raise ValueError("exact input required")
    blocks = structure.blocks
    if all(not b.is_rotation and b.value == 0 for b in blocks):
        return OrbitFiniteness("nilpotent", max(b.size for b in blocks))
    period = 1
    for b in blocks:
        if b.size != 1:
            return OrbitFiniteness("infinite")
        if b.is_rotation:
            if b.modulus_sq != 1 or not (b.angle_is_exact and b.angle.is_rational):
                return OrbitFiniteness("infinite")
            period = math.lcm(period, b.angle.rational_part.denominator)
        else:
            if not isinstance(b.value, Fraction) or b.value not in (1, -1):
                return OrbitFiniteness("infinite")
            if b.value == -1:
                period = math.lcm(period, 2)
    return OrbitFiniteness("power-identity", period)


# ---------------------------------------------------------- assembly


def rotation_matrix(turns) -> np.ndarray:
    t = 2 * math.pi * float(_as_mpf(turns))
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, -s], [s, c]])


def block_matrix(block: JordanBlock, normalize_by=None) -> np.ndarray:
    """Real Jordan block ``J_m(A)``: ``A`` on the diagonal, identity above it."""
    scale = 1.0 if normalize_by is None else 1.0 / float(normalize_by)
    m = block.size
    if block.is_rotation:
        a = float(_as_mpf(block.value)) * scale * rotation_matrix(block.angle)
        out = np.zeros((2 * m, 2 * m))
        for i in range(m):
            out[2 * i:2 * i + 2, 2 * i:2 * i + 2] = a
            if i + 1 < m:
                out[2 * i:2 * i + 2, 2 * i + 2:2 * i + 4] = np.eye(2)
        return out
    lam = float(_as_mpf(block.value)) * scale
    return lam * np.eye(m) + np.diag(np.ones(m - 1), 1)


def direct_sum(*mats: np.ndarray) -> np.ndarray:
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n))
    i = 0
    for m in mats:
        k = m.shape[0]
        out[i:i + k, i:i + k] = m
        i += k
    return out


def canonical_matrix(blocks: Sequence[JordanBlock] | JordanStructure, normalize_by=None) -> np.ndarray:
    if isinstance(blocks, JordanStructure):
        blocks = blocks.blocks
    if not blocks:
        return np.zeros((0, 0))
    return direct_sum(*(block_matrix(b, normalize_by) for b in blocks))


def companion(poly_coeffs: Sequence) -> linalg.Matrix:
    """Exact companion matrix of a monic polynomial (highest degree first)."""
    p = P.monic(P.trim(poly_coeffs))
    n = len(p) - 1
    m = linalg.zeros(n)
    for i in range(1, n):
        m[i][i - 1] = Fraction(1)
    for i in range(n):
        m[i][n - 1] = -p[n - i]
    return m
