"""
Validation utilities for carnot-conformal.

Provides helper functions for input validation.
"""

from typing import Any, Mapping, Sequence

from ..exceptions import DimensionMismatchError, EmptyInputError, ValidationError


def validate_non_empty_list(values: Sequence[Any], context: str = "list") -> None:
    """
    Validate that a sequence is not empty.

    Args:
        values: The sequence to validate
        context: Context for error message

    Raises:
        EmptyInputError: If the sequence is empty
    """
    if not values:
        raise EmptyInputError(f"{context} cannot be empty")


def validate_positive_number(value: Any, context: str = "value", allow_zero: bool = False) -> None:
    """
    Validate that a number is positive.

    Args:
        value: The number to validate
        context: Context for error message
        allow_zero: Whether to allow zero

    Raises:
        ValidationError: If number is not positive
    """
    if allow_zero:
        if value < 0:
            raise ValidationError(f"{context} must be non-negative")
    else:
        if value <= 0:
            raise ValidationError(f"{context} must be positive")


def validate_vector_length(vector: Sequence[Any], dim: int, context: str = "vector") -> None:
    """
    Validate that a coordinate vector has the expected length.

    Args:
        vector: The coordinates to validate
        dim: Expected length
        context: Context for error message

    Raises:
        DimensionMismatchError: If the length differs from dim
    """
    if len(vector) != dim:
        raise DimensionMismatchError(f"{context} has length {len(vector)}, expected {dim}")


def validate_square_matrix(
    matrix: Sequence[Sequence[Any]], dim: int, context: str = "matrix"
) -> None:
    """
    Validate that a row-major matrix is dim x dim.

    Args:
        matrix: The matrix rows
        dim: Expected size
        context: Context for error message

    Raises:
        DimensionMismatchError: If the matrix is not dim x dim
    """
    if len(matrix) != dim or any(len(row) != dim for row in matrix):
        raise DimensionMismatchError(f"{context} must be {dim}x{dim}")


def validate_mapping(value: Any, context: str = "value") -> None:
    """
    Validate that a decoded JSON value is an object.

    Args:
        value: The value to validate
        context: Context for error message

    Raises:
        ValidationError: If value is not a mapping
    """
    if not isinstance(value, Mapping):
        raise ValidationError(f"{context} must be a JSON object, got {type(value).__name__}")


def validate_probability(value: Any, context: str = "probability") -> None:
    """
    Validate that a number lies in [0, 1].

    Raises:
        ValidationError: If the value is outside [0, 1]
    """
    if not 0 <= value <= 1:
        raise ValidationError(f"{context} must lie in [0, 1]")


__all__ = [
    "validate_non_empty_list",
    "validate_positive_number",
    "validate_vector_length",
    "validate_square_matrix",
    "validate_probability",
    "validate_mapping",
]
