"""Exact and numeric Q-linear dependence of turns, with the constant 1 adjoined."""

from .field import (
    BUILTIN_SYMBOLS,
    BasisMismatchError,
    ExactReal,
    IrrationalBasis,
    common_basis,
    to_fraction,
    unify,
)
from .lll import DependentRowsError, lll_reduce
from .relations import (
    Certainty,
    RelationCertificate,
    RelationKind,
    SpanMembership,
    detect_relation_numeric,
    full_support_combination,
    full_support_relation,
    integer_relation,
    moment_curve_rank,
    numeric_relation_basis,
    numeric_span_memberships,
    relation_lattice_basis,
    span_membership,
    verify_exact,
)

__all__ = [
    "BUILTIN_SYMBOLS",
    "BasisMismatchError",
    "Certainty",
    "DependentRowsError",
    "ExactReal",
    "IrrationalBasis",
    "RelationCertificate",
    "RelationKind",
    "SpanMembership",
    "common_basis",
    "detect_relation_numeric",
    "full_support_combination",
    "full_support_relation",
    "integer_relation",
    "lll_reduce",
    "moment_curve_rank",
    "numeric_relation_basis",
    "numeric_span_memberships",
    "relation_lattice_basis",
    "span_membership",
    "to_fraction",
    "unify",
    "verify_exact",
]
