"""Decide orbit reflexivity and R-orbit reflexivity from a real Jordan structure.

Both deciders reduce to span tests on rotation angles measured in turns:
``alpha_j in span_Q({1} + {alpha_i : i != j})`` for every j.  Angles that
are all ``ExactReal`` give exact verdicts; anything numeric goes through
lattice reduction and is labelled heuristic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

import mpmath

from .config import DEFAULTS, Options
from .jordan.structure import JordanBlock, JordanStructure, Source, _as_mpf
from .qspan.field import mp_str
from .qspan import (
    Certainty,
    ExactReal,
    RelationCertificate,
    SpanMembership,
    full_support_relation,
    numeric_span_memberships,
    span_membership,
    unify,
)

EXACT_RADIUS_TOL = mpmath.mpf(2) ** -64


class Property(str, Enum):
    ORBIT = "orbit-reflexive"
    R_ORBIT = "r-orbit-reflexive"


@dataclass(frozen=True)
class Verdict:
    property: Property
    answer: bool
    rule: str
    evidence: dict
    certainty: Certainty
    certificates: tuple[RelationCertificate, ...] = ()
    memberships: tuple[SpanMembership, ...] = field(default=())

    def __post_init__(self):
        if self.answer:
            return
        if self.property is Property.R_ORBIT:
            if self.rule not in ("split-gap", "non-split-independent-angle"):
                raise ValueError(f"rule {self.rule!r} cannot give a negative R-orbit verdict")
        elif self.rule != "lemma-hard-relation" or all(m.member for m in self.memberships):
            raise ValueError("a negative orbit verdict needs a failed span membership")

    @property
    def answer_text(self) -> str:
        return "yes" if self.answer else "no"

    def to_json(self) -> dict:
        return {
            "property": self.property.value,
            "answer": self.answer_text,
            "rule": self.rule,
            "certainty": self.certainty.value,
            "evidence": self.evidence,
            "memberships": [_membership_json(m) for m in self.memberships],
            "certificates": [certificate_json(c) for c in self.certificates],
        }


def _membership_json(m: SpanMembership) -> dict:
    return {
        "member": m.member,
        "coefficients": None if m.coefficients is None else [str(c) for c in m.coefficients],
        "certainty": m.certainty.value,
    }


def certificate_json(c: RelationCertificate) -> dict:
    return {
        "kind": c.kind.value,
        "coefficients": None if c.coefficients is None else list(c.coefficients),
        "residual": None if c.residual is None else mpmath.nstr(c.residual, 6),
        "height_bound": c.height_bound,
        "certainty": c.certainty.value,
        "precision_bits": c.precision_bits,
    }


@dataclass(frozen=True)
class LemmaHardForm:
    """``R_theta_1 + ... + R_theta_k + B + C`` with ``B^2 = I`` and ``r(C) < 1``."""

    angles: tuple
    has_B: bool
    has_C: bool
    dim_B: int = 0
    dim_C: int = 0
    angle_errors: tuple = ()


# ------------------------------------------------------------- radii


def _radius_cmp(block: JordanBlock, structure: JordanStructure, target_sq: Fraction | None = None) -> int:
    """Sign of ``|block| - r`` where r is the spectral radius (or ``sqrt(target_sq)``)."""
    ref_sq = structure.spectral_radius_sq if target_sq is None else target_sq
    if block.modulus_sq is not None and ref_sq is not None:
        return (block.modulus_sq > ref_sq) - (block.modulus_sq < ref_sq)
    ref = structure.spectral_radius if target_sq is None else mpmath.sqrt(_as_mpf(target_sq))
    tol = _radius_tol(structure) * max(1, ref)
    diff = block.modulus - ref
    if abs(diff) <= tol:
        return 0
    return 1 if diff > 0 else -1


def _radius_tol(structure: JordanStructure) -> mpmath.mpf:
    if structure.source is Source.EXACT:
        return EXACT_RADIUS_TOL
    return mpmath.mpf(max(math.sqrt(structure.tolerance or 1e-8), 1e-12))


def _spectral_radius_vs_one(structure: JordanStructure) -> int:
    if structure.spectral_radius_sq is not None:
        r2 = structure.spectral_radius_sq
        return (r2 > 1) - (r2 < 1)
    diff = structure.spectral_radius - 1
    if abs(diff) <= _radius_tol(structure):
        return 0
    return 1 if diff > 0 else -1


def _at_radius(structure: JordanStructure) -> list[JordanBlock]:
    return [b for b in structure.blocks if _radius_cmp(b, structure) == 0]


# --------------------------------------------------------- span tests


def _angle_precision(angle_errors: Sequence[float], options: Options) -> int:
    worst = max((e for e in angle_errors if e), default=0.0)
    if worst <= 0:
        return options.precision_bits
    bits = int(-math.log2(worst))
    return max(16, min(options.precision_bits, bits))


def _numeric_height(height_bound: int, bits: int, k: int) -> int:
    # keep the search below the height where LLL finds spurious short vectors
    cap = int(2 ** (bits / (k + 1) - 2))
    return max(1, min(height_bound, cap))


def span_tests(
    angles: Sequence, angle_errors: Sequence[float], options: Options, numeric_source: bool
) -> tuple[list[SpanMembership], RelationCertificate, Certainty, dict]:
    """Per-angle span memberships, the full-support certificate and the resulting certainty."""
    if all(isinstance(a, ExactReal) for a in angles):
        unified = unify(list(angles))
        mems = [span_membership(a, unified[:j] + unified[j + 1:]) for j, a in enumerate(unified)]
        cert = full_support_relation(unified)
        certainty = Certainty.HEURISTIC if numeric_source else Certainty.EXACT
        return mems, cert, certainty, {"method": "exact", "basis": list(unified[0].basis.symbols)}
    bits = _angle_precision(angle_errors, options)
    height = _numeric_height(options.height_bound, bits, len(angles))
    mems, cert = numeric_span_memberships(list(angles), height, bits)
    info = {"method": "lattice", "precision_bits": bits, "height_bound": height}
    return mems, cert, Certainty.HEURISTIC, info


def _angle_json(a) -> object:
    return a.to_json() if isinstance(a, ExactReal) else mp_str(_as_mpf(a), 20)


# ---------------------------------------------------------- deciders


def to_lemma_hard_form(structure: JordanStructure) -> LemmaHardForm:
    """Split a structure with ``r(T) = 1`` and only size-1 blocks at radius 1."""
    if _spectral_radius_vs_one(structure) != 0:
        raise ValueError("lemma form needs spectral radius 1")
    angles, errs = [], []
    dim_b = dim_c = 0
    for b in structure.blocks:
        on_circle = _radius_cmp(b, structure, Fraction(1)) == 0
        if on_circle and b.size != 1:
            raise ValueError("lemma form needs every radius-1 block to have size 1")
        if on_circle and b.is_rotation:
            angles.append(b.angle)
            errs.append(b.angle_err)
        elif on_circle:
            dim_b += 1
        else:
            dim_c += b.real_dim
    return LemmaHardForm(tuple(angles), dim_b > 0, dim_c > 0, dim_b, dim_c, tuple(errs))


def _base_certainty(structure: JordanStructure) -> Certainty:
    return Certainty.EXACT if structure.source is Source.EXACT else Certainty.HEURISTIC


def _all_rational(angles) -> bool:
    return all(isinstance(a, ExactReal) and a.is_rational for a in angles)


def classify_orbit_reflexive(structure: JordanStructure, options: Options = DEFAULTS) -> Verdict:
    base = _base_certainty(structure)
    evidence: dict = {"spectral_radius": mp_str(structure.spectral_radius, 20)}
    cmp = _spectral_radius_vs_one(structure)
    if cmp < 0:
        return Verdict(Property.ORBIT, True, "r<1", evidence, base)
    if cmp > 0:
        return Verdict(Property.ORBIT, True, "r>1", evidence, base)
    big = [b for b in structure.blocks if b.size >= 2 and _radius_cmp(b, structure, Fraction(1)) == 0]
    if big:
        evidence["block"] = big[0].to_json()
        return Verdict(Property.ORBIT, True, "big-block-at-radius", evidence, base)
    form = to_lemma_hard_form(structure)
    evidence.update(
        angles=[_angle_json(a) for a in form.angles], has_B=form.has_B, has_C=form.has_C
    )
    if _all_rational(form.angles):
        return Verdict(Property.ORBIT, True, "finite-orbit", evidence, base)
    mems, cert, certainty, info = span_tests(
        form.angles, form.angle_errors, options, structure.source is Source.NUMERIC
    )
    evidence["span_test"] = info
    answer = all(m.member for m in mems)
    return Verdict(Property.ORBIT, answer, "lemma-hard-relation", evidence, certainty, (cert,), tuple(mems))


def classify_r_orbit_reflexive(structure: JordanStructure, options: Options = DEFAULTS) -> Verdict:
    base = _base_certainty(structure)
    evidence: dict = {"spectral_radius": mp_str(structure.spectral_radius, 20)}
    if structure.spectral_radius_sq == 0 or (
        structure.spectral_radius_sq is None and structure.spectral_radius <= _radius_tol(structure)
    ):
        return Verdict(Property.R_ORBIT, True, "nilpotent", evidence, base)
    top = _at_radius(structure)
    m = max(b.size for b in top)
    evidence["m"] = m
    if all(not b.is_rotation for b in top):
        sizes = sorted((b.size for b in top), reverse=True) + [0]
        evidence["two_largest"] = sizes[:2]
        gap = sizes[0] - sizes[1]
        if gap > 1:
            return Verdict(Property.R_ORBIT, False, "split-gap", evidence, base)
        return Verdict(Property.R_ORBIT, True, "split-no-gap", evidence, base)
    rot = [b for b in top if b.is_rotation and b.size == m]
    evidence["angles"] = [_angle_json(b.angle) for b in rot]
    if not rot:
        return Verdict(Property.R_ORBIT, True, "non-split-blocks-smaller", evidence, base)
    mems, cert, certainty, info = span_tests(
        [b.angle for b in rot], [b.angle_err for b in rot], options, structure.source is Source.NUMERIC
    )
    evidence["span_test"] = info
    if all(m_.member for m_ in mems):
        return Verdict(Property.R_ORBIT, True, "non-split-dependent-angles", evidence, certainty, (cert,), tuple(mems))
    return Verdict(Property.R_ORBIT, False, "non-split-independent-angle", evidence, certainty, (cert,), tuple(mems))


def classify(structure: JordanStructure, options: Options = DEFAULTS) -> tuple[Verdict, Verdict]:
    return classify_orbit_reflexive(structure, options), classify_r_orbit_reflexive(structure, options)
