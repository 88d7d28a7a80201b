"""
Diagonal Heintze pairs

A diagonal Heintze pair is a nilpotent algebra with a derivation D that is
diagonalizable over the reals with positive eigenvalues. This module finds
the eigenvalue layering, detects Carnot type, and builds the canonical
D-invariant flag whose successive quotients are of Carnot type.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import sympy

from ..exceptions import (
    FlagNotPreservedError,
    IndexOutOfRangeError,
    IrrationalSpectrumError,
    NonPositiveEigenvalueError,
    NotCarnotTypeError,
    NotDerivationError,
    NotDiagonalizableError,
)
from ..constants import Tolerance
from ..utils import as_fraction_matrix, format_exact, validate_square_matrix
from .lie_core import LieAlgebra, Subquotient, generated_subalgebra, normalizer, subquotient
from .linalg import ZERO, Matrix, Subspace, identity, inverse, mat_mul, mat_vec, nullspace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Layer:
    """Eigenspace V_lambda of the derivation."""

    eigenvalue: Fraction
    space: Subspace

    @property
    def dim(self) -> int:
        return self.space.dim


@dataclass(frozen=True)
class DiagonalHeintzePair:
    """
    A nilpotent algebra with a positive diagonalizable derivation.

    Build with layer_decomposition(); layers are sorted by eigenvalue.
    """

    algebra: LieAlgebra
    derivation: Matrix
    layers: Tuple[Layer, ...]

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def eigenvalues(self) -> Tuple[Fraction, ...]:
        return tuple(layer.eigenvalue for layer in self.layers)

    @property
    def first_layer(self) -> Layer:
        return self.layers[0]

    @cached_property
    def adapted_basis(self) -> Matrix:
        """Columns are the layer bases, listed layer by layer."""
        columns = [row for layer in self.layers for row in layer.space.rows]
        return tuple(tuple(col[i] for col in columns) for i in range(self.dim))

    @cached_property
    def projectors(self) -> Tuple[Matrix, ...]:
        """Exact projectors onto each layer along the others."""
        t = self.adapted_basis
        t_inv = inverse(t)
        out = []
        start = 0
        for layer in self.layers:
            stop = start + layer.dim
            selector = tuple(
                tuple(t_inv[r][c] if start <= r < stop else ZERO for c in range(self.dim))
                for r in range(self.dim)
            )
            out.append(mat_mul(t, selector))
            start = stop
        return tuple(out)

    def layer_components(self, v: Sequence[Any]) -> Tuple[Tuple[Any, ...], ...]:
        """Components of v in each layer."""
        return tuple(mat_vec(p, v) for p in self.projectors)

    @cached_property
    def carnot_degrees(self) -> Optional[Tuple[int, ...]]:
        """Degree of each layer when the pair is of Carnot type, else None."""
        return _carnot_degrees(self)

    def layer_index(self, eigenvalue: Fraction) -> int:
        for j, layer in enumerate(self.layers):
            if layer.eigenvalue == eigenvalue:
                return j
        raise IndexOutOfRangeError(f"no layer with eigenvalue {eigenvalue}")


def _check_derivation(algebra: LieAlgebra, d: Matrix) -> None:
    n = algebra.dim
    for i in range(n):
        for j in range(i + 1, n):
            ei, ej = algebra.unit(i), algebra.unit(j)
            lhs = mat_vec(d, algebra.bracket(ei, ej))
            rhs = [
                a + b
                for a, b in zip(
                    algebra.bracket(mat_vec(d, ei), ej), algebra.bracket(ei, mat_vec(d, ej))
                )
            ]
            if list(lhs) != rhs:
                raise NotDerivationError(
                    f"D[e{i + 1}, e{j + 1}] != [De{i + 1}, e{j + 1}] + [e{i + 1}, De{j + 1}]"
                )


def _rational_spectrum(d: Matrix) -> List[Fraction]:
    """Distinct eigenvalues of a rational matrix, refusing irrational or complex ones."""
    lam = sympy.Symbol("lam")
    m = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in d])
    _, factors = sympy.factor_list(m.charpoly(lam).as_expr(), lam)
    roots: List[Fraction] = []
    for factor, _ in factors:
        poly = sympy.Poly(factor, lam)
        if poly.degree() == 1:
            a, b = poly.all_coeffs()
            root = sympy.Rational(-b, a)
            roots.append(Fraction(int(root.p), int(root.q)))
            continue
        numeric = [complex(r) for r in poly.nroots()]
        if any(abs(r.imag) > Tolerance.EIGENVALUE for r in numeric):
            raise NotDiagonalizableError(f"non-real eigenvalues {numeric} from factor {factor}")
        for r in numeric:
            candidate = Fraction(r.real).limit_denominator(10**6)
            logger.warning("recertifying eigenvalue %.12g as %s", r.real, candidate)
            if poly.eval(sympy.Rational(candidate.numerator, candidate.denominator)) != 0:
                raise IrrationalSpectrumError(
                    f"eigenvalue {r.real:.12g} of factor {factor} is irrational"
                )
            roots.append(candidate)
    return sorted(set(roots))


def layer_decomposition(
    algebra: LieAlgebra, derivation: Sequence[Sequence[Any]]
) -> DiagonalHeintzePair:
    """
    Split the algebra into eigenspaces of the derivation.

    Args:
        algebra: A nilpotent algebra
        derivation: Rational matrix acting on coordinate columns

    Returns:
        The pair with exact eigenspaces, eigenvalues ascending

    Raises:
        NotDerivationError: If D[x, y] != [Dx, y] + [x, Dy] on some basis pair
        NotDiagonalizableError: If the spectrum is complex or eigenspaces do not span
        IrrationalSpectrumError: If an eigenvalue is real but irrational
        NonPositiveEigenvalueError: If some eigenvalue is <= 0
    """
    n = algebra.dim
    validate_square_matrix(derivation, n, "derivation")
    d = as_fraction_matrix(derivation)
    _check_derivation(algebra, d)
    eigenvalues = _rational_spectrum(d)
    bad = [ev for ev in eigenvalues if ev <= 0]
    if bad:
        raise NonPositiveEigenvalueError(f"eigenvalue {bad[0]} is not positive")
    unit = identity(n)
    layers = []
    for ev in eigenvalues:
        shifted = [[d[i][j] - ev * unit[i][j] for j in range(n)] for i in range(n)]
        layers.append(Layer(ev, Subspace.span(nullspace(shifted, n), n)))
    total = sum(layer.dim for layer in layers)
    if total != n:
        raise NotDiagonalizableError(f"eigenspaces span dimension {total} of {n}")
    logger.debug("layers %s", [(str(layer.eigenvalue), layer.dim) for layer in layers])
    return DiagonalHeintzePair(algebra, d, tuple(layers))


def _diagonal(values: Sequence[Any]) -> Matrix:
    n = len(values)
    return tuple(tuple(Fraction(values[i]) if i == j else ZERO for j in range(n)) for i in range(n))


def diagonal_pair(algebra: LieAlgebra, values: Sequence[Any]) -> DiagonalHeintzePair:
    """layer_decomposition with D = diag(values)."""
    return layer_decomposition(algebra, _diagonal(values))


def _carnot_degrees(pair: DiagonalHeintzePair) -> Optional[Tuple[int, ...]]:
    if generated_subalgebra(pair.algebra, pair.first_layer.space) != Subspace.full(pair.dim):
        return None
    base = pair.first_layer.eigenvalue
    ratios = [layer.eigenvalue / base for layer in pair.layers]
    if any(r.denominator != 1 for r in ratios):
        return None
    return tuple(int(r) for r in ratios)


def is_carnot_type(pair: DiagonalHeintzePair) -> bool:
    """
    Check whether D is a multiple of a Carnot derivation.

    True when the lowest layer generates the algebra and every eigenvalue is
    an integer multiple of the lowest one.
    """
    return pair.carnot_degrees is not None


def carnot_grading(pair: DiagonalHeintzePair) -> Tuple[int, ...]:
    """
    Degree j of each layer V_j for a Carnot-type pair.

    Raises:
        NotCarnotTypeError: If the pair is not of Carnot type
    """
    if pair.carnot_degrees is None:
        raise NotCarnotTypeError("pair is not of Carnot type")
    return pair.carnot_degrees


def layer_projectors(pair: DiagonalHeintzePair) -> Tuple[Matrix, ...]:
    """Exact projectors onto each layer along the others, in layer order."""
    return pair.projectors


def conjugate_pair(pair: DiagonalHeintzePair, t: Sequence[Sequence[Any]]) -> DiagonalHeintzePair:
    """
    The same pair written in the basis given by the columns of t.

    A subspace W of the original coordinates corresponds to the image of W
    under t^{-1} in the new coordinates.
    """
    t = as_fraction_matrix(t)
    t_inv = inverse(t)
    algebra = pair.algebra.change_basis(t)
    return layer_decomposition(algebra, mat_mul(mat_mul(t_inv, pair.derivation), t))


def induced_derivation(pair: DiagonalHeintzePair, sq: Subquotient) -> Matrix:
    """The derivation induced by D on upper / lower."""
    q = sq.algebra.dim
    unit = identity(q)
    columns = [sq.project(mat_vec(pair.derivation, sq.lift(unit[a]))) for a in range(q)]
    return tuple(tuple(col[b] for col in columns) for b in range(q))


@dataclass(frozen=True)
class FlagStep:
    """One quotient n_i / n_{i-1} of the preserved flag."""

    lower: Subspace
    upper: Subspace
    quotient: DiagonalHeintzePair
    subquotient: Subquotient

    @property
    def scale(self) -> Fraction:
        """Smallest eigenvalue of the induced derivation."""
        return self.quotient.first_layer.eigenvalue


@dataclass(frozen=True)
class PreservedFlag:
    """
    The chain 0 = n_0 < n_1 < ... < n_s = n with Carnot-type quotients.
    """

    pair: DiagonalHeintzePair
    members: Tuple[Subspace, ...]
    steps: Tuple[FlagStep, ...]

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(member.dim for member in self.members)

    def verify(self) -> None:
        """
        Re-check the flag invariants exactly.

        Raises:
            FlagNotPreservedError: If a member is not D-invariant, a step is
                not an ideal inclusion, or a quotient is not of Carnot type
        """
        for member in self.members:
            if not member.is_invariant(self.pair.derivation):
                raise FlagNotPreservedError(f"{member!r} is not D-invariant")
        for i, step in enumerate(self.steps, start=1):
            for x in step.upper.rows:
                for y in step.lower.rows:
                    if not step.lower.contains(self.pair.algebra.bracket(x, y)):
                        raise FlagNotPreservedError(f"n_{i - 1} is not an ideal of n_{i}")
            if not is_carnot_type(step.quotient):
                raise FlagNotPreservedError(f"quotient {i} is not of Carnot type")


def _step(pair: DiagonalHeintzePair, lower: Subspace, upper: Subspace) -> FlagStep:
    sq = subquotient(pair.algebra, upper, lower)
    quotient_pair = layer_decomposition(sq.algebra, induced_derivation(pair, sq))
    return FlagStep(lower, upper, quotient_pair, sq)


def _flag_members(pair: DiagonalHeintzePair, depth: int = 0) -> List[Subspace]:
    """Nonzero members of the preserved flag, ending with the full algebra."""
    n = pair.dim
    full = Subspace.full(n)
    if is_carnot_type(pair):
        return [full]
    tower = [generated_subalgebra(pair.algebra, pair.first_layer.space)]
    while tower[-1] != full:
        tower.append(normalizer(pair.algebra, tower[-1]))
    logger.debug("depth %d normalizer tower dims %s", depth, [h.dim for h in tower])
    members: List[Subspace] = []
    lower = Subspace.zero(n)
    for upper in tower:
        step = _step(pair, lower, upper)
        if is_carnot_type(step.quotient):
            members.append(upper)
        else:
            logger.info(
                "refining quotient of dimension %d at depth %d", step.quotient.dim, depth
            )
            for inner in _flag_members(step.quotient, depth + 1):
                members.append(step.subquotient.lift_subspace(inner))
        lower = upper
    return members


def preserved_sequence(pair: DiagonalHeintzePair) -> PreservedFlag:
    """
    The preserved subgroup sequence of a diagonal Heintze pair.

    h_1 is the subalgebra generated by the lowest layer and h_i = N(h_{i-1})
    until the whole algebra is reached. Each quotient that is not of Carnot
    type is refined by running the same process on the quotient pair and
    pulling the result back.

    Args:
        pair: A diagonal Heintze pair

    Returns:
        The flag with its per-step quotient pairs

    Examples:
        >>> pair = diagonal_pair(LieAlgebra.heisenberg(), (1, 2, 3))
        >>> preserved_sequence(pair).dims
        (0, 1, 2, 3)
    """
    members = [Subspace.zero(pair.dim)] + _flag_members(pair)
    steps = tuple(_step(pair, lower, upper) for lower, upper in zip(members, members[1:]))
    logger.info("preserved flag dims %s", [m.dim for m in members])
    return PreservedFlag(pair, tuple(members), steps)


def induced_pair(pair: DiagonalHeintzePair, flag: PreservedFlag, i: int) -> DiagonalHeintzePair:
    """
    The Carnot-type pair on n_i / n_{i-1}.

    Raises:
        IndexOutOfRangeError: If i is outside 1..s
    """
    if not 1 <= i <= flag.length:
        raise IndexOutOfRangeError(f"flag index {i} outside 1..{flag.length}")
    if flag.pair != pair:
        logger.warning("flag was computed for a different pair")
    return flag.steps[i - 1].quotient


def check_flag_preserved(flag: PreservedFlag, a: Sequence[Sequence[Fraction]]) -> None:
    """
    Check A(n_i) = n_i for every flag member.

    Raises:
        FlagNotPreservedError: Naming the first member that moves
    """
    for i, member in enumerate(flag.members):
        if member.image(a) != member:
            raise FlagNotPreservedError(f"flag member n_{i} is not preserved")


def flag_report(flag: PreservedFlag) -> List[Dict[str, Any]]:
    """JSON-ready description of each flag step."""
    report = []
    for step in flag.steps:
        report.append(
            {
                "basis_rows": [[format_exact(x) for x in row] for row in step.upper.rows],
                "quotient_dim": step.quotient.dim,
                "quotient_eigenvalues": [format_exact(ev) for ev in step.quotient.eigenvalues],
                "carnot_step_count": len(step.quotient.layers),
            }
        )
    return report


def pair_summary(
    pair: DiagonalHeintzePair, grading: Optional[Tuple[int, ...]] = None
) -> Dict[str, Any]:
    return {
        "eigenvalues": [format_exact(ev) for ev in pair.eigenvalues],
        "layer_dims": [layer.dim for layer in pair.layers],
        "layers": [
            [[format_exact(x) for x in row] for row in layer.space.rows] for layer in pair.layers
        ],
        "carnot_type": grading is not None,
        "grading": list(grading) if grading is not None else None,
    }


__all__ = [
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
