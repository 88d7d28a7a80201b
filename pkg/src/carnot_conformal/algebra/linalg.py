"""
Exact rational linear algebra

Row echelon forms, kernels and canonical subspaces over the rationals. Every
matrix is row-major; a matrix acts on column coordinate vectors.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, List, Sequence, Tuple

from ..exceptions import DimensionMismatchError, SingularMatrixError
from ..utils import validate_vector_length

Vector = Tuple[Fraction, ...]
Matrix = Tuple[Vector, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def rref(rows: Iterable[Sequence[Fraction]], ncols: int) -> Tuple[List[List[Fraction]], List[int]]:
    """
    Reduced row echelon form with pivots normalised to 1.

    Args:
        rows: Matrix rows (any number, each of length ncols)
        ncols: Number of columns

    Returns:
        (nonzero reduced rows, pivot column of each row)
    """
    m = [[Fraction(x) for x in row] for row in rows]
    pivots: List[int] = []
    piv_r = 0
    for piv_c in range(ncols):
        for i_row in range(piv_r, len(m)):
            if m[i_row][piv_c] != 0:
                break
        else:
            continue
        m[piv_r], m[i_row] = m[i_row], m[piv_r]
        fp = m[piv_r][piv_c]
        if fp != 1:
            m[piv_r] = [x / fp for x in m[piv_r]]
        pivot_row = m[piv_r]
        for r in range(len(m)):
            if r == piv_r:
                continue
            fr = m[r][piv_c]
            if fr == 0:
                continue
            m[r] = [a - fr * b for a, b in zip(m[r], pivot_row)]
        pivots.append(piv_c)
        piv_r += 1
        if piv_r == len(m):
            break
    return m[:piv_r], pivots


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> List[Vector]:
    """
    Basis of {x : M x = 0}, one vector per free column.

    Args:
        rows: Matrix rows
        ncols: Number of unknowns

    Returns:
        Kernel basis vectors
    """
    reduced, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def rank(rows: Sequence[Sequence[Fraction]], ncols: int) -> int:
    """Rank of a matrix."""
    return len(rref(rows, ncols)[1])


def identity(n: int) -> Matrix:
    """The n x n identity matrix."""
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def transpose(a: Sequence[Sequence[Fraction]]) -> Matrix:
    return tuple(tuple(col) for col in zip(*a))


def mat_vec(a: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> Vector:
    if a and len(a[0]) != len(x):
        raise DimensionMismatchError(f"matrix with {len(a[0])} columns applied to length {len(x)}")
    return tuple(sum((aij * xj for aij, xj in zip(row, x) if aij), ZERO) for row in a)


def mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    bt = transpose(b)
    return tuple(
        tuple(sum((x * y for x, y in zip(row, col) if x), ZERO) for col in bt) for row in a
    )


def inverse(a: Sequence[Sequence[Fraction]]) -> Matrix:
    """
    Exact inverse by Gauss-Jordan elimination.

    Raises:
        SingularMatrixError: If the matrix is not invertible
    """
    n = len(a)
    augmented = [list(row) + list(e) for row, e in zip(a, identity(n))]
    reduced, pivots = rref(augmented, 2 * n)
    if pivots[:n] != list(range(n)) or len(reduced) < n:
        raise SingularMatrixError("matrix is singular")
    return tuple(tuple(row[n:]) for row in reduced)


def determinant(a: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by fraction-preserving elimination."""
    m = [[Fraction(x) for x in row] for row in a]
    n = len(m)
    det = ONE
    for c in range(n):
        pivot = next((r for r in range(c, n) if m[r][c] != 0), None)
        if pivot is None:
            return ZERO
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            factor = m[r][c] / m[c][c]
            if factor:
                m[r] = [x - factor * y for x, y in zip(m[r], m[c])]
    return det


@dataclass(frozen=True)
class Subspace:
    """
    A linear subspace of Q^n stored by its reduced row echelon basis.

    The echelon form is canonical, so two Subspace values are equal exactly
    when they describe the same subspace.

    Examples:
        >>> w = Subspace.span([(1, 0, 1), (2, 0, 2)], 3)
        >>> w.dim
        1
        >>> w == Subspace.span([(-1, 0, -1)], 3)
        True
    """

    ambient_dim: int
    rows: Matrix

    @classmethod
    def span(cls, vectors: Iterable[Sequence[Fraction]], ambient_dim: int) -> "Subspace":
        vectors = list(vectors)
        for v in vectors:
            validate_vector_length(v, ambient_dim, "spanning vector")
        reduced, _ = rref(vectors, ambient_dim)
        return cls(ambient_dim, tuple(tuple(row) for row in reduced))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, identity(ambient_dim))

    @classmethod
    def coordinate(cls, indices: Iterable[int], ambient_dim: int) -> "Subspace":
        """Span of the standard basis vectors with the given 0-based indices."""
        unit = identity(ambient_dim)
        return cls.span([unit[i] for i in indices], ambient_dim)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> Matrix:
        return self.rows

    @cached_property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(row) if x != 0) for row in self.rows)

    @cached_property
    def complement_indices(self) -> Tuple[int, ...]:
        """Non-pivot coordinates; their unit vectors span a complement."""
        pivots = set(self.pivots)
        return tuple(i for i in range(self.ambient_dim) if i not in pivots)

    def reduce(self, v: Sequence[Fraction]) -> Vector:
        """Residual of v modulo the subspace (zero exactly when v lies in it)."""
        validate_vector_length(v, self.ambient_dim)
        out = list(v)
        for row, p in zip(self.rows, self.pivots):
            c = out[p]
            if c:
                out = [a - c * b for a, b in zip(out, row)]
        return tuple(out)

    def contains(self, v: Sequence[Fraction]) -> bool:
        return not any(self.reduce(v))

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(row) for row in other.rows)

    def coordinates(self, v: Sequence[Fraction]) -> Vector:
        """
        Coordinates of v in the echelon basis.

        Raises:
            DimensionMismatchError: If v does not lie in the subspace
        """
        if not self.contains(v):
            raise DimensionMismatchError("vector does not lie in the subspace")
        return tuple(v[p] for p in self.pivots)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        return Subspace.span(self.rows + other.rows, self.ambient_dim)

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        annihilator = self.annihilator() + other.annihilator()
        return Subspace.span(nullspace(annihilator, self.ambient_dim), self.ambient_dim)

    def annihilator(self) -> List[Vector]:
        """Basis of linear forms vanishing on the subspace."""
        return nullspace(self.rows, self.ambient_dim)

    def image(self, matrix: Sequence[Sequence[Fraction]]) -> "Subspace":
        """Image of the subspace under a square linear map."""
        return Subspace.span([mat_vec(matrix, row) for row in self.rows], len(matrix))

    def is_invariant(self, matrix: Sequence[Sequence[Fraction]]) -> bool:
        return all(self.contains(mat_vec(matrix, row)) for row in self.rows)

    def _check_ambient(self, other: "Subspace") -> None:
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatchError(
                f"subspaces of Q^{self.ambient_dim} and Q^{other.ambient_dim}"
            )

    def __repr__(self) -> str:
        rows = ", ".join("(" + ", ".join(str(x) for x in row) + ")" for row in self.rows)
        return f"Subspace(dim={self.dim}, rows=[{rows}])"


__all__ = [
    "Vector",
    "Matrix",
    "rref",
    "nullspace",
    "rank",
    "identity",
    "transpose",
    "mat_vec",
    "mat_mul",
    "inverse",
    "determinant",
    "Subspace",
]
