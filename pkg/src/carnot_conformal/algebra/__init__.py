"""
Exact algebra: rational linear algebra, nilpotent Lie algebras, BCH
multiplication and diagonal Heintze pairs.
"""

from .bch import bch_multiply, conjugate, dynkin_terms, group_inverse
from .heintze import (
    DiagonalHeintzePair,
    FlagStep,
    Layer,
    PreservedFlag,
    carnot_grading,
    check_flag_preserved,
    conjugate_pair,
    diagonal_pair,
    flag_report,
    induced_derivation,
    induced_pair,
    is_carnot_type,
    layer_decomposition,
    layer_projectors,
    pair_summary,
    preserved_sequence,
)
from .lie_core import (
    LieAlgebra,
    LieAlgebraBuilder,
    Projection,
    Subquotient,
    ValidationReport,
    ad_matrix,
    bracket,
    center,
    derived_algebra,
    direct_product,
    generated_subalgebra,
    is_ideal,
    is_subalgebra,
    lower_central_series,
    normalizer,
    quotient,
    subalgebra,
    subquotient,
    validate,
)
from .linalg import Subspace

__all__ = [
    # Linear algebra
    "Subspace",
    # Lie algebras
    "LieAlgebra",
    "LieAlgebraBuilder",
    "ValidationReport",
    "Projection",
    "Subquotient",
    "validate",
    "bracket",
    "ad_matrix",
    "is_subalgebra",
    "is_ideal",
    "generated_subalgebra",
    "normalizer",
    "quotient",
    "lower_central_series",
    "derived_algebra",
    "center",
    "subalgebra",
    "subquotient",
    "direct_product",
    # Group law
    "dynkin_terms",
    "bch_multiply",
    "group_inverse",
    "conjugate",
    # Heintze pairs
    "Layer",
    "DiagonalHeintzePair",
    "FlagStep",
    "PreservedFlag",
    "layer_decomposition",
    "diagonal_pair",
    "is_carnot_type",
    "carnot_grading",
    "layer_projectors",
    "conjugate_pair",
    "induced_derivation",
    "preserved_sequence",
    "induced_pair",
    "check_flag_preserved",
    "flag_report",
    "pair_summary",
]
