"""
Exact scalar helpers for carnot-conformal.

Converts JSON scalars to exact rationals or elements of Q(sqrt2, sqrt3) and
formats exact values back to strings.
"""

from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence, Tuple, Union

import sympy

from ..exceptions import ValidationError

Exact = Union[Fraction, sympy.Expr]

_QUADRATIC_BASIS = {
    "a": sympy.Integer(1),
    "b": sympy.sqrt(2),
    "c": sympy.sqrt(3),
    "d": sympy.sqrt(6),
}


def parse_rational(value: Any) -> Fraction:
    """
    Convert an integer or a "p/q" string to a Fraction.

    Args:
        value: int, Fraction or string such as "-3/4"

    Returns:
        The exact rational

    Raises:
        ValidationError: If value is a float or cannot be parsed
    """
    if isinstance(value, bool):
        raise ValidationError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValidationError(f"not a rational: {value!r}") from e
    raise ValidationError(f"rationals must be strings 'p/q' or integers, got {value!r}")


def parse_quadratic(value: Any) -> Exact:
    """
    Convert a Q(sqrt2, sqrt3) coefficient record to an exact value.

    A record {"a": p, "b": q, "c": r, "d": s} stands for
    p + q*sqrt(2) + r*sqrt(3) + s*sqrt(6). Plain rationals are accepted too.

    Args:
        value: Mapping of coefficients or a rational scalar

    Returns:
        Fraction when the value is rational, otherwise a sympy expression
    """
    if not isinstance(value, Mapping):
        return parse_rational(value)
    unknown = set(value) - set(_QUADRATIC_BASIS)
    if unknown:
        raise ValidationError(f"unknown quadratic field keys: {sorted(unknown)}")
    coefficients = {key: parse_rational(value.get(key, 0)) for key in _QUADRATIC_BASIS}
    if not any(coefficients[key] for key in "bcd"):
        return coefficients["a"]
    return sympy.expand(
        sum(to_sympy(c) * _QUADRATIC_BASIS[key] for key, c in coefficients.items())
    )


def as_fraction_vector(values: Iterable[Any]) -> Tuple[Fraction, ...]:
    """Convert a sequence of JSON scalars to a tuple of Fractions."""
    return tuple(parse_rational(v) for v in values)


def as_fraction_matrix(rows: Sequence[Sequence[Any]]) -> Tuple[Tuple[Fraction, ...], ...]:
    """Convert a row-major JSON matrix to a tuple of Fraction rows."""
    return tuple(as_fraction_vector(row) for row in rows)


def to_sympy(value: Any) -> sympy.Expr:
    """Convert a Fraction, int or sympy value to a sympy expression."""
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    return sympy.sympify(value)


def is_exact(value: Any) -> bool:
    """
    Check whether a scalar is exact.

    Args:
        value: Scalar to check

    Returns:
        True for ints, Fractions and sympy numbers
    """
    return isinstance(value, (int, Fraction, sympy.Expr)) and not isinstance(value, bool)


def is_exact_zero(value: Any) -> bool:
    """Check exact vanishing, expanding sympy expressions first."""
    if isinstance(value, sympy.Expr):
        return sympy.expand(value) == 0
    return value == 0


def format_exact(value: Any) -> str:
    """
    Format an exact value for JSON reports.

    Args:
        value: Fraction, int or sympy expression

    Returns:
        "p/q" for rationals, sympy's string form for surds
    """
    if isinstance(value, sympy.Expr):
        value = sympy.expand(value)
        if value.is_Rational:
            return str(Fraction(int(value.p), int(value.q)))
        return str(value)
    return str(Fraction(value))


__all__ = [
    "Exact",
    "parse_rational",
    "parse_quadratic",
    "as_fraction_vector",
    "as_fraction_matrix",
    "to_sympy",
    "is_exact",
    "is_exact_zero",
    "format_exact",
]
