"""Characteristic polynomials and their roots, and the real Jordan structure built from them."""

from .poly import cyclotomic, square_free_decomposition
from .roots import Root, poly_roots
from .structure import (
    JordanBlock,
    JordanStructure,
    Kind,
    OrbitFiniteness,
    Source,
    StructureError,
    block_matrix,
    canonical_matrix,
    char_poly,
    companion,
    direct_sum,
    extract_structure,
    from_blocks,
    orbit_finiteness,
    rotation_matrix,
)

__all__ = [
    "JordanBlock",
    "JordanStructure",
    "Kind",
    "OrbitFiniteness",
    "Root",
    "Source",
    "StructureError",
    "block_matrix",
    "canonical_matrix",
    "char_poly",
    "companion",
    "cyclotomic",
    "direct_sum",
    "extract_structure",
    "from_blocks",
    "orbit_finiteness",
    "poly_roots",
    "rotation_matrix",
    "square_free_decomposition",
]
