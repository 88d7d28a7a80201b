"""
Nilpotent Lie algebras over the rationals

Structure constants, brackets, generated subalgebras, normalizers, quotients
and the lower central series. Vectors are coordinate tuples in the algebra's
basis; algebraic operations stay exact on Fractions and also accept floats.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..exceptions import (
    DimensionMismatchError,
    NotIdealError,
    NotNilpotentError,
    NotSubalgebraError,
    ValidationError,
)
from ..utils import validate_positive_number, validate_square_matrix, validate_vector_length
from .linalg import ZERO, Matrix, Subspace, Vector, identity, inverse, mat_vec, nullspace

logger = logging.getLogger(__name__)

Structure = Tuple[Tuple[Tuple[Fraction, ...], ...], ...]


@dataclass(frozen=True)
class LieAlgebra:
    """
    A finite-dimensional Lie algebra given by structure constants.

    structure[i][j][k] is the coefficient of e_k in [e_i, e_j] (0-based).

    Examples:
        >>> h = LieAlgebra.heisenberg()
        >>> bracket(h, (1, 0, 0), (0, 1, 0))
        (Fraction(0, 1), Fraction(0, 1), Fraction(1, 1))
    """

    dim: int
    basis_names: Tuple[str, ...]
    structure: Structure

    def __post_init__(self):
        validate_positive_number(self.dim, "algebra dimension", allow_zero=True)
        if len(self.basis_names) != self.dim:
            raise ValidationError(f"expected {self.dim} basis names, got {len(self.basis_names)}")
        if len(self.structure) != self.dim or any(
            len(row) != self.dim or any(len(cell) != self.dim for cell in row)
            for row in self.structure
        ):
            n = self.dim
            raise ValidationError(f"structure table must have shape {n}x{n}x{n}")

    @classmethod
    def from_brackets(
        cls,
        basis_names: Sequence[str],
        brackets: Mapping[Tuple[int, int], Mapping[int, Any]],
    ) -> "LieAlgebra":
        """
        Build an algebra from the brackets [e_i, e_j] with i < j (0-based).

        Args:
            basis_names: Labels of the basis vectors
            brackets: {(i, j): {k: c}} meaning [e_i, e_j] = sum c e_k

        Returns:
            The antisymmetric structure table

        Raises:
            ValidationError: If a key has i >= j or an index is out of range
        """
        n = len(basis_names)
        table = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
        for (i, j), result in brackets.items():
            if not (0 <= i < j < n):
                raise ValidationError(
                    f"bracket key ({i + 1}, {j + 1}) must satisfy 1 <= i < j <= {n}"
                )
            for k, c in result.items():
                if not 0 <= k < n:
                    raise ValidationError(f"bracket result index {k + 1} outside 1..{n}")
                table[i][j][k] += Fraction(c)
                table[j][i][k] -= Fraction(c)
        return cls(n, tuple(basis_names), _freeze(table))

    @classmethod
    def abelian(cls, n: int, basis_names: Optional[Sequence[str]] = None) -> "LieAlgebra":
        names = tuple(basis_names) if basis_names else tuple(f"e{i + 1}" for i in range(n))
        return cls.from_brackets(names, {})

    @classmethod
    def heisenberg(cls) -> "LieAlgebra":
        """The first Heisenberg algebra, [e1, e2] = e3."""
        return cls.from_brackets(("e1", "e2", "e3"), {(0, 1): {2: 1}})

    @cached_property
    def terms(self) -> Tuple[Tuple[int, int, int, Fraction], ...]:
        """Nonzero structure constants as (i, j, k, c)."""
        return tuple(
            (i, j, k, c)
            for i, row in enumerate(self.structure)
            for j, cell in enumerate(row)
            for k, c in enumerate(cell)
            if c != 0
        )

    @cached_property
    def nilpotency_class(self) -> int:
        return len(lower_central_series(self)) - 1

    @property
    def is_abelian(self) -> bool:
        return not self.terms

    def zero(self) -> Vector:
        return (ZERO,) * self.dim

    @cached_property
    def units(self) -> Matrix:
        return identity(self.dim)

    def unit(self, i: int) -> Vector:
        """The i-th basis vector (0-based)."""
        return self.units[i]

    def bracket(self, x: Sequence[Any], y: Sequence[Any]) -> Tuple[Any, ...]:
        out: List[Any] = [ZERO] * self.dim
        for i, j, k, c in self.terms:
            xi = x[i]
            if xi:
                yj = y[j]
                if yj:
                    out[k] = out[k] + c * xi * yj
        return tuple(out)

    def change_basis(
        self, t: Sequence[Sequence[Fraction]], basis_names: Optional[Sequence[str]] = None
    ) -> "LieAlgebra":
        """
        Structure constants in the basis given by the columns of t.

        Args:
            t: Invertible rational matrix, column a holds f_a in old coordinates
            basis_names: Names for the new basis (default f1, f2, ...)

        Returns:
            The isomorphic algebra written in the new basis
        """
        validate_square_matrix(t, self.dim, "change of basis")
        t_inv = inverse(t)
        columns = [tuple(row[a] for row in t) for a in range(self.dim)]
        table = [
            [list(mat_vec(t_inv, self.bracket(fa, fb))) for fb in columns] for fa in columns
        ]
        names = tuple(basis_names) if basis_names else tuple(f"f{a + 1}" for a in range(self.dim))
        return LieAlgebra(self.dim, names, _freeze(table))


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validate(): violated triples are 1-based."""

    antisymmetry_violations: Tuple[Tuple[int, int, int], ...]
    jacobi_violations: Tuple[Tuple[int, int, int], ...]
    nilpotency_class: int

    @property
    def antisymmetry_ok(self) -> bool:
        return not self.antisymmetry_violations

    @property
    def jacobi_ok(self) -> bool:
        return not self.jacobi_violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "antisymmetry_ok": self.antisymmetry_ok,
            "antisymmetry_violations": [list(t) for t in self.antisymmetry_violations],
            "jacobi_ok": self.jacobi_ok,
            "jacobi_violations": [list(t) for t in self.jacobi_violations],
            "nilpotency_class": self.nilpotency_class,
        }


class LieAlgebraBuilder:
    """
    Fluent builder for structure-constant tables

    Examples:
        >>> algebra = LieAlgebraBuilder()\\
        ...     .basis("e1", "e2", "e3")\\
        ...     .bracket("e1", "e2", e3=1)\\
        ...     .build()
        >>> algebra.nilpotency_class
        2
    """

    def __init__(self):
        """Initialize an empty builder"""
        self._names: List[str] = []
        self._brackets: Dict[Tuple[int, int], Dict[int, Fraction]] = {}

    def basis(self, *names: str) -> "LieAlgebraBuilder":
        """
        Append basis vectors

        Args:
            *names: Labels of the new basis vectors

        Returns:
            Self for chaining
        """
        for name in names:
            if not name or name in self._names:
                raise ValidationError(f"basis name {name!r} is empty or repeated")
            self._names.append(name)
        return self

    def bracket(self, left: str, right: str, **result: Any) -> "LieAlgebraBuilder":
        """
        Set [left, right] = sum of coefficient * basis vector

        Args:
            left: Name of the first basis vector
            right: Name of the second basis vector
            **result: Coefficients keyed by basis name (ints, Fractions or "p/q")

        Returns:
            Self for chaining
        """
        i, j = self._index(left), self._index(right)
        if i == j:
            raise ValidationError(f"[{left}, {left}] is always zero")
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        self._brackets[(i, j)] = {
            self._index(name): sign * Fraction(c) for name, c in result.items()
        }
        return self

    def build(self) -> LieAlgebra:
        """
        Build the algebra

        Returns:
            LieAlgebra with the recorded brackets
        """
        return LieAlgebra.from_brackets(self._names, self._brackets)

    def _index(self, name: str) -> int:
        try:
            return self._names.index(name)
        except ValueError:
            raise ValidationError(f"unknown basis vector {name!r}") from None


def _freeze(table: Sequence[Sequence[Sequence[Any]]]) -> Structure:
    return tuple(tuple(tuple(Fraction(c) for c in cell) for cell in row) for row in table)


def _check(algebra: LieAlgebra, *vectors: Sequence[Any]) -> None:
    for v in vectors:
        validate_vector_length(v, algebra.dim, "vector")


def _check_subspace(algebra: LieAlgebra, subspace: Subspace) -> None:
    if subspace.ambient_dim != algebra.dim:
        raise DimensionMismatchError(
            f"subspace of Q^{subspace.ambient_dim} in an algebra of dimension {algebra.dim}"
        )


def validate(algebra: LieAlgebra) -> ValidationReport:
    """
    Check antisymmetry, the Jacobi identity and nilpotency.

    Args:
        algebra: The algebra to check

    Returns:
        Report listing every violated triple and the nilpotency class

    Raises:
        NotNilpotentError: If the lower central series stabilizes above zero
    """
    n = algebra.dim
    c = algebra.structure
    antisymmetry = tuple(
        (i + 1, j + 1, k + 1)
        for i in range(n)
        for j in range(i, n)
        for k in range(n)
        if c[i][j][k] != -c[j][i][k]
    )
    jacobi = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                ei, ej, ek = algebra.unit(i), algebra.unit(j), algebra.unit(k)
                total = [
                    a + b + d
                    for a, b, d in zip(
                        algebra.bracket(ei, algebra.bracket(ej, ek)),
                        algebra.bracket(ej, algebra.bracket(ek, ei)),
                        algebra.bracket(ek, algebra.bracket(ei, ej)),
                    )
                ]
                if any(total):
                    jacobi.append((i + 1, j + 1, k + 1))
    if antisymmetry or jacobi:
        logger.info(
            "structure table has %d antisymmetry and %d Jacobi violations",
            len(antisymmetry),
            len(jacobi),
        )
    return ValidationReport(antisymmetry, tuple(jacobi), algebra.nilpotency_class)


def bracket(algebra: LieAlgebra, x: Sequence[Any], y: Sequence[Any]) -> Tuple[Any, ...]:
    """
    The Lie bracket [x, y].

    Raises:
        DimensionMismatchError: If x or y has the wrong length
    """
    _check(algebra, x, y)
    return algebra.bracket(x, y)


def ad_matrix(algebra: LieAlgebra, x: Sequence[Any]) -> Matrix:
    """Matrix of ad(x): column j is [x, e_j]."""
    _check(algebra, x)
    columns = [algebra.bracket(x, algebra.unit(j)) for j in range(algebra.dim)]
    return tuple(tuple(col[i] for col in columns) for i in range(algebra.dim))


def is_subalgebra(algebra: LieAlgebra, h: Subspace) -> bool:
    _check_subspace(algebra, h)
    return all(
        h.contains(algebra.bracket(a, b)) for idx, a in enumerate(h.rows) for b in h.rows[idx + 1 :]
    )


def is_ideal(algebra: LieAlgebra, h: Subspace) -> bool:
    _check_subspace(algebra, h)
    return all(
        h.contains(algebra.bracket(algebra.unit(i), b)) for i in range(algebra.dim) for b in h.rows
    )


def generated_subalgebra(algebra: LieAlgebra, s: Subspace) -> Subspace:
    """
    Smallest bracket-closed subspace containing s.

    Args:
        algebra: Ambient algebra
        s: Generating subspace

    Returns:
        The generated subalgebra
    """
    _check_subspace(algebra, s)
    current = s
    while True:
        products = [
            algebra.bracket(a, b)
            for idx, a in enumerate(current.rows)
            for b in current.rows[idx + 1 :]
        ]
        grown = Subspace.span(current.rows + tuple(products), algebra.dim)
        if grown.dim == current.dim:
            return current
        current = grown


def normalizer(algebra: LieAlgebra, h: Subspace) -> Subspace:
    """
    N(h) = {X : [X, Y] in h for all Y in h}.

    Raises:
        NotSubalgebraError: If h is not closed under the bracket
    """
    if not is_subalgebra(algebra, h):
        raise NotSubalgebraError(f"{h!r} is not a subalgebra")
    n = algebra.dim
    rows = []
    for b in h.rows:
        residues = [h.reduce(algebra.bracket(algebra.unit(i), b)) for i in range(n)]
        rows.extend([residues[i][k] for i in range(n)] for k in range(n))
    return Subspace.span(nullspace(rows, n), n)


@dataclass(frozen=True)
class Projection:
    """
    Quotient map onto the complement spanned by the non-pivot coordinates.

    matrix has one row per quotient basis vector; lift() is the section that
    places quotient coordinates back on the complement coordinates.
    """

    matrix: Matrix
    complement: Tuple[int, ...]
    ambient_dim: int

    def __call__(self, v: Sequence[Any]) -> Tuple[Any, ...]:
        return mat_vec(self.matrix, v)

    def lift(self, w: Sequence[Any]) -> Tuple[Any, ...]:
        out: List[Any] = [ZERO] * self.ambient_dim
        for value, index in zip(w, self.complement):
            out[index] = value
        return tuple(out)


def quotient(algebra: LieAlgebra, ideal: Subspace) -> Tuple[LieAlgebra, Projection]:
    """
    The quotient algebra L / ideal.

    Args:
        algebra: Ambient algebra
        ideal: An ideal of algebra

    Returns:
        (quotient algebra, projection); the quotient basis is the image of the
        non-pivot coordinates of the ideal's echelon form

    Raises:
        NotIdealError: If ideal is not an ideal
    """
    if not is_ideal(algebra, ideal):
        raise NotIdealError(f"{ideal!r} is not an ideal")
    complement = ideal.complement_indices
    n = algebra.dim
    columns = [ideal.reduce(algebra.unit(j)) for j in range(n)]
    matrix = tuple(tuple(col[c] for col in columns) for c in complement)
    projection = Projection(matrix, complement, n)
    if not complement:
        return LieAlgebra(0, (), ()), projection
    table = [
        [list(projection(algebra.bracket(algebra.unit(a), algebra.unit(b)))) for b in complement]
        for a in complement
    ]
    names = tuple(algebra.basis_names[c] for c in complement)
    return LieAlgebra(len(complement), names, _freeze(table)), projection


def lower_central_series(algebra: LieAlgebra) -> List[Subspace]:
    """
    gamma_1 = n, gamma_{i+1} = [n, gamma_i], ending with the zero subspace.

    Raises:
        NotNilpotentError: If the series stabilizes above zero
    """
    n = algebra.dim
    series = [Subspace.full(n)]
    while series[-1].dim:
        current = series[-1]
        following = Subspace.span(
            [algebra.bracket(algebra.unit(i), b) for i in range(n) for b in current.rows], n
        )
        if following.dim == current.dim:
            raise NotNilpotentError(f"lower central series stabilizes at dimension {current.dim}")
        series.append(following)
    return series


def derived_algebra(algebra: LieAlgebra) -> Subspace:
    """[n, n]."""
    return lower_central_series(algebra)[1]


def center(algebra: LieAlgebra) -> Subspace:
    n = algebra.dim
    rows = []
    for j in range(n):
        images = [algebra.bracket(algebra.unit(i), algebra.unit(j)) for i in range(n)]
        rows.extend([images[i][k] for i in range(n)] for k in range(n))
    return Subspace.span(nullspace(rows, n), n)


@dataclass(frozen=True)
class Subquotient:
    """
    The algebra upper / lower for a subalgebra upper with ideal lower.

    lift sends quotient coordinates to vectors of the ambient algebra lying in
    upper; project sends vectors of upper to quotient coordinates.
    """

    algebra: LieAlgebra
    upper: Subspace
    lower: Subspace
    projection: Projection

    def lift(self, w: Sequence[Any]) -> Tuple[Any, ...]:
        coords = self.projection.lift(w)
        out: List[Any] = [ZERO] * self.upper.ambient_dim
        for c, row in zip(coords, self.upper.rows):
            if c:
                out = [a + c * b for a, b in zip(out, row)]
        return tuple(out)

    def project(self, v: Sequence[Any]) -> Tuple[Any, ...]:
        return self.projection(self.upper.coordinates(v))

    def lift_subspace(self, w: Subspace) -> Subspace:
        """Preimage q^{-1}(w) inside upper."""
        return Subspace.span(
            self.lower.rows + tuple(self.lift(row) for row in w.rows), self.upper.ambient_dim
        )


def subalgebra(algebra: LieAlgebra, h: Subspace) -> LieAlgebra:
    """
    The subalgebra h written in its echelon basis.

    Raises:
        NotSubalgebraError: If h is not closed under the bracket
    """
    if not is_subalgebra(algebra, h):
        raise NotSubalgebraError(f"{h!r} is not a subalgebra")
    table = [[list(h.coordinates(algebra.bracket(a, b))) for b in h.rows] for a in h.rows]
    unit = identity(algebra.dim)
    names = tuple(
        algebra.basis_names[p] if row == unit[p] else f"w{idx + 1}"
        for idx, (row, p) in enumerate(zip(h.rows, h.pivots))
    )
    return LieAlgebra(h.dim, names, _freeze(table))


def subquotient(algebra: LieAlgebra, upper: Subspace, lower: Subspace) -> Subquotient:
    """
    The quotient of the subalgebra upper by its ideal lower.

    Raises:
        NotSubalgebraError: If upper is not a subalgebra
        NotIdealError: If lower is not an ideal of upper
    """
    if not upper.contains_subspace(lower):
        raise NotIdealError("lower subspace is not contained in upper subspace")
    restricted = subalgebra(algebra, upper)
    lower_coords = Subspace.span([upper.coordinates(row) for row in lower.rows], upper.dim)
    quotient_algebra, projection = quotient(restricted, lower_coords)
    return Subquotient(quotient_algebra, upper, lower, projection)


def direct_product(
    first: LieAlgebra, second: LieAlgebra, basis_names: Optional[Iterable[str]] = None
) -> LieAlgebra:
    """
    The direct product first x second, first's basis listed before second's.
    """
    n1, n2 = first.dim, second.dim
    brackets: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for offset, algebra in ((0, first), (n1, second)):
        for i, j, k, c in algebra.terms:
            if i < j:
                brackets.setdefault((i + offset, j + offset), {})[k + offset] = c
    names = (
        tuple(basis_names)
        if basis_names is not None
        else first.basis_names + tuple(f"{name}~" for name in second.basis_names)
    )
    if len(names) != n1 + n2:
        raise ValidationError(f"expected {n1 + n2} basis names")
    return LieAlgebra.from_brackets(names, brackets)


__all__ = [
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
]
