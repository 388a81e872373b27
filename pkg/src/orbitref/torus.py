"""Orbits ``n * alpha mod 1`` on the torus, with Weyl averages and grid coverage built on them.

Phases are unsigned 64-bit fixed point (``2**64`` is one turn).  An
irrational turn is rounded once to a 64-bit step and then advanced by
wrapping integer multiplication, so there is no drift with n; a rational
turn ``p/q`` gives exact floors ``floor(2**64 * (n p mod q) / q)``.

Cell ``i`` of a grid covers phases ``[i/grid, (i+1)/grid)`` and the index
is computed exactly from the fixed-point phase.  The covering radius is
the largest L-infinity torus distance, in cells, from a cell centre to the
centre of an occupied cell, so it is reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np
from mpmath import mp

from .qspan.field import ExactReal

ONE_TURN = 1 << 64
CHUNK = 1 << 18
MAX_CELLS = 1 << 24
_TWO_PI_OVER = 2 * math.pi / ONE_TURN
_QUARTER = {0: 1 + 0j, 1: 1j, 2: -1 + 0j, 3: -1j}


@dataclass(frozen=True)
class TorusPoint:
    turns: tuple[float, ...]

    def __post_init__(self):
        if any(not 0 <= t < 1 for t in self.turns):
            raise ValueError("torus coordinates must lie in [0, 1)")


@dataclass(frozen=True)
class Monomial:
    exponents: tuple[int, ...]

    @property
    def is_constant(self) -> bool:
        return all(e == 0 for e in self.exponents)


class Phase:
    """Fixed-point orbit of one turn value."""

    def __init__(self, alpha):
        self.rational: Fraction | None = None
        if isinstance(alpha, ExactReal):
            if alpha.is_rational:
                self.rational = alpha.rational_part % 1
            else:
                alpha = alpha.value(128)
        elif isinstance(alpha, (Fraction, int)):
            self.rational = Fraction(alpha) % 1
        elif isinstance(alpha, float) and not math.isfinite(alpha):
            raise ValueError("turns must be finite")
        if self.rational is not None:
            q = self.rational.denominator
            if q >= 1 << 32:
                raise ValueError("rational turn denominators must be below 2**32")
            self.p, self.q = self.rational.numerator, q
            self.big, self.small = divmod(ONE_TURN, q)
            self.step = None
        else:
            with mp.workprec(192):
                frac = mpmath.mpf(alpha) - mpmath.floor(mpmath.mpf(alpha))
                self.step = np.uint64(int(mpmath.floor(frac * ONE_TURN)) % ONE_TURN)

    def at(self, ns: np.ndarray) -> np.ndarray:
        """Phases of ``n * alpha`` for a uint64 array of n."""
        if self.step is not None:
            with np.errstate(over="ignore"):
                return ns * self.step
        r = ((ns % np.uint64(self.q)) * np.uint64(self.p)) % np.uint64(self.q)
        return r * np.uint64(self.big) + (r * np.uint64(self.small)) // np.uint64(self.q)


def _as_phase(alpha) -> Phase:
    return alpha if isinstance(alpha, Phase) else Phase(alpha)


def _combine(alphas: Sequence, exponents: Sequence[int]):
    """``<m, alpha>`` kept exact when every turn is ExactReal or rational."""
    if len(alphas) != len(exponents):
        raise ValueError("monomial and turn vector lengths differ")
    terms = [(int(e), a) for e, a in zip(exponents, alphas) if e]
    if not terms:
        return Fraction(0)
    if all(isinstance(a, (Fraction, int)) for _, a in terms):
        return sum((e * Fraction(a) for e, a in terms), Fraction(0))
    if all(isinstance(a, ExactReal) for _, a in terms):
        from .qspan.field import unify

        vals = unify([a for _, a in terms])
        total = vals[0] * terms[0][0]
        for (e, _), v in zip(terms[1:], vals[1:]):
            total = total + v * e
        return total
    with mp.workprec(192):
        return mpmath.fsum(e * _mpf(a) for e, a in terms)


def _mpf(a) -> mpmath.mpf:
    if isinstance(a, ExactReal):
        return a.value(192)
    if isinstance(a, Fraction):
        return mpmath.mpf(a.numerator) / a.denominator
    return mpmath.mpf(a)


def _unit(phases: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ang = phases.astype(np.float64) * _TWO_PI_OVER
    c, s = np.cos(ang), np.sin(ang)
    quarter = (phases & np.uint64((1 << 62) - 1)) == 0
    if quarter.any():
        idx = (phases[quarter] >> np.uint64(62)).astype(int)
        c[quarter] = np.array([_QUARTER[i].real for i in idx])
        s[quarter] = np.array([_QUARTER[i].imag for i in idx])
    return c, s


def weyl_average(alphas: Sequence, exponents: Sequence[int], N: int) -> complex:
    """``(1/N) * sum_{n=1..N} exp(2 pi i <m, n alpha>)``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    beta = _combine(alphas, exponents)
    if isinstance(beta, ExactReal) and beta.is_rational:
        beta = beta.rational_part
    if isinstance(beta, Fraction) and beta.denominator == 1:
        return complex(1.0, 0.0)
    phase = Phase(beta)
    re_parts, im_parts = [], []
    for start in range(1, N + 1, CHUNK):
        ns = np.arange(start, min(N, start + CHUNK - 1) + 1, dtype=np.uint64)
        c, s = _unit(phase.at(ns))
        re_parts.append(math.fsum(c))
        im_parts.append(math.fsum(s))
    return complex(math.fsum(re_parts) / N, math.fsum(im_parts) / N)


def weyl_bound(alphas: Sequence, exponents: Sequence[int], N: int) -> float:
    """Geometric-sum bound ``2 / (N |1 - exp(2 pi i beta)|)``; inf when beta is an integer."""
    beta = _combine(alphas, exponents)
    with mp.workprec(128):
        b = _mpf(beta)
        denom = abs(1 - mpmath.expjpi(2 * b))
        if denom == 0:
            return math.inf
        return float(2 / (N * denom))


# ------------------------------------------------------------ coverage


@dataclass(frozen=True)
class DensityReport:
    k: int
    grid: int
    N: int
    occupied: int
    empty_fraction: Fraction
    covering_radius: Fraction  # L-infinity distance between cell centres, in turns

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "grid": self.grid,
            "N": self.N,
            "occupied": self.occupied,
            "empty_fraction": str(self.empty_fraction),
            "empty_fraction_float": float(self.empty_fraction),
            "covering_radius": str(self.covering_radius),
        }


def _cells(phases: np.ndarray, grid: int) -> np.ndarray:
    """``floor(phase * grid / 2**64)`` without leaving uint64."""
    g = np.uint64(grid)
    hi = phases >> np.uint64(32)
    lo = phases & np.uint64(0xFFFFFFFF)
    return (hi * g + ((lo * g) >> np.uint64(32))) >> np.uint64(32)


def occupancy(alphas: Sequence, N: int, grid: int) -> np.ndarray:
    """Boolean grid marking the cells hit by ``n * alpha`` for n = 1..N."""
    k = len(alphas)
    if k < 1:
        raise ValueError("need at least one turn")
    if N < 1:
        raise ValueError("N must be at least 1")
    if grid < 1 or grid >= 1 << 32:
        raise ValueError("grid must be in [1, 2**32)")
    if grid**k > MAX_CELLS:
        raise ValueError(f"grid**k = {grid**k} cells exceeds the budget of {MAX_CELLS}")
    phases = [_as_phase(a) for a in alphas]
    occ = np.zeros(grid**k, dtype=bool)
    for start in range(1, N + 1, CHUNK):
        ns = np.arange(start, min(N, start + CHUNK - 1) + 1, dtype=np.uint64)
        flat = np.zeros(ns.shape, dtype=np.int64)
        for ph in phases:
            flat = flat * grid + _cells(ph.at(ns), grid).astype(np.int64)
        occ[flat] = True
    return occ.reshape((grid,) * k)


def covering_radius_cells(occ: np.ndarray) -> int:
    """Max over cells of the L-infinity torus distance (in cells) to an occupied cell."""
    if not occ.any():
        raise ValueError("empty orbit")
    reach = occ.copy()
    steps = 0
    while not reach.all():
        grown = reach.copy()
        for ax in range(reach.ndim):
            grown |= np.roll(grown, 1, axis=ax) | np.roll(grown, -1, axis=ax)
        reach = grown
        steps += 1
    return steps


def density_gap(alphas: Sequence, N: int, grid: int) -> DensityReport:
    occ = occupancy(alphas, N, grid)
    total = occ.size
    hit = int(occ.sum())
    return DensityReport(
        k=len(alphas),
        grid=grid,
        N=N,
        occupied=hit,
        empty_fraction=Fraction(total - hit, total),
        covering_radius=Fraction(covering_radius_cells(occ), grid),
    )


# ------------------------------------------------------------ power search


def torus_distance(x, target) -> mpmath.mpf | Fraction:
    d = (x - target) % 1
    return min(d, 1 - d)


def _verify_hit(alphas, targets, tol, n: int) -> bool:
    with mp.workprec(192):
        for a, t in zip(alphas, targets):
            if isinstance(a, (Fraction, int)) or (isinstance(a, ExactReal) and a.is_rational):
                q = a.rational_part if isinstance(a, ExactReal) else Fraction(a)
                x = (n * q) % 1
                if isinstance(t, ExactReal) and t.is_rational:
                    t = t.rational_part
                d = torus_distance(x, Fraction(t)) if isinstance(t, (Fraction, int)) else torus_distance(_mpf(x), _mpf(t))
            else:
                d = torus_distance(n * _mpf(a), _mpf(t))
            if not d < tol:
                return False
    return True


def find_power_approx(
    alphas: Sequence,
    targets: Sequence,
    tol: float,
    modulus_constraint: tuple[int, int] | None = None,
    n_max: int = 10**6,
) -> int | None:
    """Smallest n <= n_max (optionally ``n = residue mod d``) with every ``n alpha_j`` within tol of target_j."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if len(alphas) != len(targets) or not alphas:
        raise ValueError("alphas and targets must be nonempty and of equal length")
    phases = [_as_phase(a) for a in alphas]
    tphase = [np.uint64(int(mpmath.floor((_mpf(t) % 1) * ONE_TURN)) % ONE_TURN) for t in targets]
    d, res = modulus_constraint if modulus_constraint else (1, 0)
    if d < 1:
        raise ValueError("modulus must be positive")
    res %= d
    first = res if res >= 1 else d
    # slack of a few ulps lets the exact check decide borderline hits
    limit = tol * ONE_TURN + 4.0 + n_max
    stride = CHUNK * d
    for start in range(first, n_max + 1, stride):
        ns = np.arange(start, min(n_max, start + stride - 1) + 1, d, dtype=np.uint64)
        ok = np.ones(ns.shape, dtype=bool)
        for ph, tp in zip(phases, tphase):
            diff = ph.at(ns) - tp
            dist = np.minimum(diff, np.uint64(0) - diff).astype(np.float64)
            ok &= dist < limit
        for n in ns[ok]:
            if _verify_hit(alphas, targets, tol, int(n)):
                return int(n)
    return None


def simulate(
    alphas: Sequence,
    N: int,
    grid: int | None = None,
    monomials: Sequence[Sequence[int]] = (),
) -> dict:
    """Torus report: Weyl averages against their bounds, plus coverage when a grid is given."""
    out: dict = {"k": len(alphas), "N": N, "averages": []}
    for m in monomials:
        avg = weyl_average(alphas, m, N)
        bound = weyl_bound(alphas, m, N)
        out["averages"].append(
            {
                "exponents": list(m),
                "re": avg.real,
                "im": avg.imag,
                "abs": abs(avg),
                "bound": None if math.isinf(bound) else bound,
                "within_bound": math.isinf(bound) or abs(avg) <= bound,
            }
        )
    if grid:
        out["density"] = density_gap(alphas, N, grid).to_json()
    return out
