"""
Custom exceptions for carnot-conformal.

This module defines all custom exceptions used throughout the library.
"""


class CarnotConformalError(Exception):
    """Base exception for all carnot-conformal errors."""

    pass


class ValidationError(CarnotConformalError):
    """Exception raised for malformed input data or schema violations."""

    pass


class DimensionMismatchError(CarnotConformalError):
    """Exception raised when vectors, matrices or algebras have incompatible sizes."""

    pass


class NotNilpotentError(CarnotConformalError):
    """Exception raised when the lower central series stabilizes above zero."""

    pass


class NotSubalgebraError(CarnotConformalError):
    """Exception raised when a subspace is not closed under the bracket."""

    pass


class NotIdealError(CarnotConformalError):
    """Exception raised when a subspace is not an ideal of the ambient algebra."""

    pass


class NotDerivationError(CarnotConformalError):
    """Exception raised when a matrix fails the derivation identity."""

    pass


class NotDiagonalizableError(CarnotConformalError):
    """Exception raised when a derivation is not diagonalizable over the reals."""

    pass


class IrrationalSpectrumError(NotDiagonalizableError):
    """Exception raised when exact mode meets eigenvalues that are not rational."""

    pass


class NonPositiveEigenvalueError(CarnotConformalError):
    """Exception raised when a derivation has an eigenvalue <= 0."""

    pass


class NotCarnotTypeError(CarnotConformalError):
    """Exception raised when an operation needs a Carnot-type pair."""

    pass


class IndexOutOfRangeError(CarnotConformalError):
    """Exception raised for flag step indices outside 1..s."""

    pass


class SingularMatrixError(CarnotConformalError):
    """Exception raised when an invertible matrix was required."""

    pass


class DegenerateSampleError(CarnotConformalError):
    """Exception raised when a sampled pair of points coincides."""

    pass


class NonConvergentError(CarnotConformalError):
    """Exception raised when an iterative or extrapolated computation does not settle."""

    pass


class EmptyInputError(CarnotConformalError):
    """Exception raised when a non-empty collection was required."""

    pass


class PairMismatchError(CarnotConformalError):
    """Exception raised when similarity elements belong to different pairs."""

    pass


class OrbitNotStableError(CarnotConformalError):
    """Exception raised when an orbit keeps growing with the word-length cap."""

    pass


class NotFiniteError(CarnotConformalError):
    """Exception raised when an automorphism group has a continuous part."""

    pass


class NotDiagonalFormError(CarnotConformalError):
    """Exception raised when a map is not diagonal in layer-adapted coordinates."""

    pass


class FlagNotPreservedError(CarnotConformalError):
    """Exception raised when a map does not preserve a preserved-subgroup flag."""

    pass


__all__ = [
    "CarnotConformalError",
    "ValidationError",
    "DimensionMismatchError",
    "NotNilpotentError",
    "NotSubalgebraError",
    "NotIdealError",
    "NotDerivationError",
    "NotDiagonalizableError",
    "IrrationalSpectrumError",
    "NonPositiveEigenvalueError",
    "NotCarnotTypeError",
    "IndexOutOfRangeError",
    "SingularMatrixError",
    "DegenerateSampleError",
    "NonConvergentError",
    "EmptyInputError",
    "PairMismatchError",
    "OrbitNotStableError",
    "NotFiniteError",
    "NotDiagonalFormError",
    "FlagNotPreservedError",
]
