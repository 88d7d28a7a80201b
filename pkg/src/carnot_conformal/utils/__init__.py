"""
Utility functions package.

Exports validation and exact-scalar helper utilities.
"""

from .exact import (
    Exact,
    as_fraction_matrix,
    as_fraction_vector,
    format_exact,
    is_exact,
    is_exact_zero,
    parse_quadratic,
    parse_rational,
    to_sympy,
)
from .validation import (
    validate_mapping,
    validate_non_empty_list,
    validate_positive_number,
    validate_probability,
    validate_square_matrix,
    validate_vector_length,
)

__all__ = [
    # Exact scalars
    "Exact",
    "as_fraction_matrix",
    "as_fraction_vector",
    "format_exact",
    "is_exact",
    "is_exact_zero",
    "parse_quadratic",
    "parse_rational",
    "to_sympy",
    # Validation
    "validate_mapping",
    "validate_non_empty_list",
    "validate_positive_number",
    "validate_probability",
    "validate_square_matrix",
    "validate_vector_length",
]
