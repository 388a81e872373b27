"""Flip-matrix witnesses ``S`` for non-reflexive T, and sampled checks of both halves.

``S`` fails to commute with T, yet for every sampled x some (scaled) power
``lambda * T^n x`` comes close to ``S x``.  The scan runs over every n up
to the budget and keeps the best one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .classify import LemmaHardForm, span_tests, to_lemma_hard_form, _at_radius, _radius_cmp
from .config import DEFAULTS, Options
from .jordan.structure import JordanBlock, JordanStructure, Source, block_matrix, direct_sum

FLIP = np.array([[0.0, 1.0], [1.0, 0.0]])
POWER_CHUNK = 1024


class WitnessError(ValueError):
    """No witness exists for the structure (it is reflexive) or none is constructed."""


@dataclass(frozen=True)
class SampleResult:
    x: tuple[float, ...]
    best_n: int
    best_lambda: float
    residual: float

    def to_json(self) -> dict:
        return {"x": list(self.x), "best_n": self.best_n, "best_lambda": self.best_lambda, "residual": self.residual}


@dataclass(frozen=True)
class WitnessReport:
    S: np.ndarray = field(compare=False)
    commutator_norm: float
    samples: tuple[SampleResult, ...]
    mode: str  # "orbit" | "r-orbit"
    search_budget: int
    scaling: str = "plain"
    seed: int | None = None

    def __post_init__(self):
        for s in self.samples:
            if s.residual < 0 or s.best_n > self.search_budget:
                raise ValueError("invalid sample record")
            if self.mode == "orbit" and s.best_lambda != 1.0:
                raise ValueError("orbit mode fixes lambda to 1")

    @property
    def max_residual(self) -> float:
        return max(s.residual for s in self.samples)

    def to_json(self) -> dict:
        return {
            "S": self.S.tolist(),
            "commutator_norm": self.commutator_norm,
            "mode": self.mode,
            "scaling": self.scaling,
            "search_budget": self.search_budget,
            "seed": self.seed,
            "max_residual": self.max_residual,
            "samples": [s.to_json() for s in self.samples],
        }


# ------------------------------------------------------------ builders


def build_flip_witness_flat(form: LemmaHardForm, dim_b: int | None = None, dim_c: int | None = None,
                            options: Options = DEFAULTS, index: int | None = None) -> np.ndarray:
    """``S = F + I + ... + I + (I on B) + (0 on C)`` with F on an independent angle's plane."""
    k = len(form.angles)
    if k == 0:
        raise WitnessError("no rotation summand: the structure is reflexive")
    dim_b = form.dim_B if dim_b is None else dim_b
    dim_c = form.dim_C if dim_c is None else dim_c
    if index is None:
        mems, _, _, _ = span_tests(form.angles, form.angle_errors or [0.0] * k, options, False)
        independent = [j for j, m in enumerate(mems) if not m.member]
        if not independent:
            raise WitnessError("every angle lies in the span of the others: the structure is reflexive")
        index = independent[0]
    parts = [FLIP if j == index else np.eye(2) for j in range(k)]
    if dim_b:
        parts.append(np.eye(dim_b))
    if dim_c:
        parts.append(np.zeros((dim_c, dim_c)))
    return direct_sum(*parts)


def build_flip_witness_jordan(m: int, k: int, n_split: int = 0, rest_dim: int = 0, index: int = 0) -> np.ndarray:
    """Top-right-corner witness on ``k`` rotation blocks ``J_m(R)`` then ``n_split`` blocks ``J_m(+-1)``.

    The distinguished rotation block gets F in its corner, every other
    size-m block at the radius gets the identity there, and the remaining
    ``rest_dim`` coordinates get 0.
    """
    if m < 1 or k < 1:
        raise WitnessError("need at least one rotation block of size m >= 1")
    if not 0 <= index < k:
        raise ValueError("distinguished index out of range")
    parts = []
    for j in range(k):
        blk = np.zeros((2 * m, 2 * m))
        blk[0:2, 2 * m - 2:2 * m] = FLIP if j == index else np.eye(2)
        parts.append(blk)
    for _ in range(n_split):
        blk = np.zeros((m, m))
        blk[0, m - 1] = 1.0
        parts.append(blk)
    if rest_dim:
        parts.append(np.zeros((rest_dim, rest_dim)))
    return direct_sum(*parts)


# ------------------------------------------------------------ verification


def verify_noncommuting(S: np.ndarray, T: np.ndarray) -> float:
    S, T = np.asarray(S, dtype=float), np.asarray(T, dtype=float)
    if S.shape != T.shape or S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError("S and T must be square matrices of the same size")
    return float(np.linalg.norm(S @ T - T @ S, "fro"))


def unit_samples(dim: int, count: int, seed: int) -> np.ndarray:
    """``count`` reproducible unit vectors as the columns of a ``dim x count`` array."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((dim, count))
    return x / np.linalg.norm(x, axis=0)


def _binomial(ns: np.ndarray, r: int) -> np.ndarray:
    out = np.ones(ns.shape, dtype=float)
    for i in range(r):
        out *= (ns - i) / (i + 1)
    return out


def verify_pointwise_approx(
    S: np.ndarray,
    T: np.ndarray,
    samples: Sequence[Sequence[float]] | np.ndarray,
    mode: str = "r-orbit",
    n_max: int = 10**6,
    scaling: int | None = None,
    seed: int | None = None,
) -> WitnessReport:
    """Best ``lambda T^n x`` against ``S x`` over ``n <= n_max`` for each sample x.

    ``scaling=m`` rescales ``T^n`` by ``1 / C(n, m-1)`` and starts at
    ``n = m - 1`` (binomial mode, r-orbit only); ``None`` scans plain powers
    from ``n = 0``.
    """
    if mode not in ("orbit", "r-orbit"):
        raise ValueError("mode must be 'orbit' or 'r-orbit'")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if scaling is not None and mode == "orbit":
        raise ValueError("binomial scaling reparametrizes lambda and needs r-orbit mode")
    S, T = np.asarray(S, dtype=float), np.asarray(T, dtype=float)
    X = np.array(samples, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    elif X.shape[0] != T.shape[0]:
        X = X.T
    if X.shape[0] != T.shape[0]:
        raise ValueError("sample dimension differs from the matrix size")
    if np.any(np.linalg.norm(X, axis=0) == 0):
        raise ValueError("zero sample vector")
    Y = S @ X  # (dim, s)
    r = 0 if scaling is None else scaling - 1
    n0 = r
    powers = [np.eye(T.shape[0])]
    for _ in range(POWER_CHUNK - 1):
        powers.append(powers[-1] @ T)
    P = np.stack(powers)  # (C, dim, dim)

    s = X.shape[1]
    best_res = np.full(s, np.inf)
    best_n = np.zeros(s, dtype=np.int64)
    best_lam = np.ones(s)
    for start in range(n0, n_max + 1, POWER_CHUNK):
        count = min(POWER_CHUNK, n_max + 1 - start)
        base = np.linalg.matrix_power(T, start) @ X  # (dim, s)
        V = np.einsum("cij,js->csi", P[:count], base)  # (count, s, dim)
        ns = np.arange(start, start + count, dtype=float)
        if r:
            V = V / _binomial(ns, r)[:, None, None]
        Yt = Y.T[None, :, :]
        if mode == "orbit":
            lam = np.ones(V.shape[:2])
        else:
            vv = np.einsum("csi,csi->cs", V, V)
            vy = np.einsum("csi,csi->cs", V, np.broadcast_to(Yt, V.shape))
            lam = np.divide(vy, vv, out=np.zeros_like(vy), where=vv > 0)
        res = np.linalg.norm(lam[:, :, None] * V - Yt, axis=2)  # (count, s)
        idx = np.argmin(res, axis=0)
        vals = res[idx, np.arange(s)]
        better = vals < best_res
        best_res[better] = vals[better]
        best_n[better] = start + idx[better]
        best_lam[better] = lam[idx, np.arange(s)][better]
    results = tuple(
        SampleResult(tuple(float(v) for v in X[:, j]), int(best_n[j]), float(best_lam[j]), float(best_res[j]))
        for j in range(s)
    )
    return WitnessReport(
        S=S,
        commutator_norm=verify_noncommuting(S, T),
        samples=results,
        mode=mode,
        search_budget=n_max,
        scaling="plain" if scaling is None else f"binomial({scaling})",
        seed=seed,
    )


# ------------------------------------------------------------ pipelines


@dataclass(frozen=True)
class WitnessProblem:
    S: np.ndarray
    T: np.ndarray
    mode: str
    scaling: int | None
    blocks: tuple[JordanBlock, ...]


def orbit_witness_problem(structure: JordanStructure, options: Options = DEFAULTS) -> WitnessProblem:
    """Canonical ``T = R_1 + ... + R_k + B + C`` with its flat flip witness."""
    form = to_lemma_hard_form(structure)
    rot, b_part, c_part = [], [], []
    for blk in structure.blocks:
        on_circle = _radius_cmp(blk, structure, 1) == 0
        if on_circle and blk.is_rotation:
            rot.append(blk)
        elif on_circle:
            b_part.append(blk)
        else:
            c_part.append(blk)
    ordered = tuple(rot + b_part + c_part)
    S = build_flip_witness_flat(form, options=options)
    T = direct_sum(*(block_matrix(b) for b in ordered))
    return WitnessProblem(S, T, "orbit", None, ordered)


def r_orbit_witness_problem(structure: JordanStructure, options: Options = DEFAULTS) -> WitnessProblem:
    """Normalized ``T / r(T)`` in corner order with the Jordan flip witness."""
    top = _at_radius(structure)
    m = max(b.size for b in top)
    rot = [b for b in top if b.is_rotation and b.size == m]
    if not rot:
        raise WitnessError("no witness is constructed unless a size-m rotation block sits at the radius")
    mems, _, _, _ = span_tests(
        [b.angle for b in rot], [b.angle_err for b in rot], options, structure.source is Source.NUMERIC
    )
    independent = [j for j, mm in enumerate(mems) if not mm.member]
    if not independent:
        raise WitnessError("every angle lies in the span of the others: the structure is R-orbit reflexive")
    split = [b for b in top if not b.is_rotation and b.size == m]
    chosen = set(map(id, rot + split))
    rest = [b for b in structure.blocks if id(b) not in chosen]
    ordered = tuple(rot + split + rest)
    S = build_flip_witness_jordan(m, len(rot), len(split), sum(b.real_dim for b in rest), independent[0])
    radius = structure.spectral_radius
    T = direct_sum(*(block_matrix(b, normalize_by=radius) for b in ordered))
    return WitnessProblem(S, T, "r-orbit", m if m > 1 else None, ordered)


def witness_report(
    structure: JordanStructure, mode: str = "r-orbit", options: Options = DEFAULTS, n_max: int | None = None
) -> WitnessReport:
    problem = (orbit_witness_problem if mode == "orbit" else r_orbit_witness_problem)(structure, options)
    X = unit_samples(problem.T.shape[0], options.n_samples, options.seed)
    return verify_pointwise_approx(
        problem.S, problem.T, X, problem.mode, options.n_max if n_max is None else n_max, problem.scaling, options.seed
    )


def closed_form_commutator(turns: float) -> float:
    """``|| F R - R F ||_F`` for a single rotation by ``turns``."""
    return 2 * math.sqrt(2) * abs(math.sin(2 * math.pi * turns))
