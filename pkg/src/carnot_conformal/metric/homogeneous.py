"""
Homogeneous quasi-norms on a diagonal Heintze pair

rho(x, y) = ||x^{-1} * y|| with ||v|| = sum_j |v_j|^{1/lambda_j}, where v_j is
the component of v in the eigenspace V_{lambda_j}. rho is left invariant and
satisfies rho(e^{tD}x, e^{tD}y) = e^t rho(x, y).
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Any, Callable, Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
import sympy

from ..algebra.bch import bch_multiply, group_inverse
from ..algebra.heintze import DiagonalHeintzePair, carnot_grading
from ..algebra.linalg import ZERO, Matrix, Subspace, determinant, inverse, mat_mul, mat_vec
from ..constants import Defaults, Tolerance
from ..exceptions import (
    DegenerateSampleError,
    NonConvergentError,
    SingularMatrixError,
    ValidationError,
)
from ..utils import (
    is_exact_zero,
    parse_quadratic,
    to_sympy,
    validate_positive_number,
    validate_square_matrix,
    validate_vector_length,
)

logger = logging.getLogger(__name__)


def _gram_entry(value: Any) -> Any:
    if isinstance(value, sympy.Expr):
        value = sympy.expand(value)
        return Fraction(int(value.p), int(value.q)) if value.is_Rational else value
    return parse_quadratic(value)


@dataclass(frozen=True)
class DInnerProduct:
    """
    An inner product on the algebra making distinct layers orthogonal.

    gram is the exact Gram matrix in the algebra's coordinates.
    """

    gram: Matrix

    @classmethod
    def standard(cls, pair: DiagonalHeintzePair) -> "DInnerProduct":
        """The inner product for which the echelon bases of the layers are orthonormal."""
        t_inv = inverse(pair.adapted_basis)
        gram = mat_mul(tuple(zip(*t_inv)), t_inv)
        return cls(tuple(tuple(row) for row in gram))

    @classmethod
    def from_gram(cls, pair: DiagonalHeintzePair, gram: Sequence[Sequence[Any]]) -> "DInnerProduct":
        """
        Build from an exact Gram matrix after checking it.

        Entries may be rationals or elements of Q(sqrt2, sqrt3), given as
        Fractions, "p/q" strings, sympy values or {"a", "b", "c", "d"} records.

        Raises:
            ValidationError: If gram is not symmetric positive definite or
                pairs two different layers nontrivially
        """
        validate_square_matrix(gram, pair.dim, "Gram matrix")
        g = tuple(tuple(_gram_entry(x) for x in row) for row in gram)
        n = pair.dim
        if any(not is_exact_zero(g[i][j] - g[j][i]) for i in range(n) for j in range(i)):
            raise ValidationError("Gram matrix is not symmetric")
        for k in range(1, n + 1):
            if not exact_determinant([row[:k] for row in g[:k]]) > 0:
                raise ValidationError(f"Gram matrix is not positive definite (leading minor {k})")
        for a, first in enumerate(pair.layers):
            for second in pair.layers[a + 1 :]:
                for u in first.space.rows:
                    gu = mat_vec(g, u)
                    for v in second.space.rows:
                        if not is_exact_zero(sum((x * y for x, y in zip(gu, v)), ZERO)):
                            message = f"layers {first.eigenvalue} and {second.eigenvalue}"
                            raise ValidationError(f"{message} are not orthogonal")
        return cls(g)

    @property
    def rational(self) -> bool:
        return all(isinstance(x, Fraction) for row in self.gram for x in row)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.gram])

    def inner(self, u: Sequence[Any], v: Sequence[Any]) -> Any:
        """Exact (or float) value of <u, v>."""
        gv = mat_vec(self.gram, v)
        return sum((a * b for a, b in zip(u, gv)), ZERO)

    def restricted_gram(self, space: Subspace) -> Matrix:
        """Gram matrix of the echelon basis of a subspace."""
        return tuple(tuple(self.inner(u, v) for v in space.rows) for u in space.rows)


def as_float_vector(v: Sequence[Any]) -> np.ndarray:
    return np.array([float(x) for x in v], dtype=float)


class _LayerNorms:
    """Float projectors and Gram matrix for repeated norm evaluation."""

    def __init__(self, pair: DiagonalHeintzePair, ip: DInnerProduct):
        self.projectors = [
            np.array([[float(x) for x in row] for row in p]) for p in pair.projectors
        ]
        self.exponents = [1.0 / float(ev) for ev in pair.eigenvalues]
        self.gram = ip.array

    def __call__(self, v: np.ndarray) -> float:
        total = 0.0
        for p, e in zip(self.projectors, self.exponents):
            c = p @ v
            sq = float(c @ self.gram @ c)
            if sq > 0.0:
                total += math.sqrt(sq) ** e
        return total


@lru_cache(maxsize=32)
def _layer_norms(pair: DiagonalHeintzePair, ip: DInnerProduct) -> _LayerNorms:
    return _LayerNorms(pair, ip)


def quasi_norm(pair: DiagonalHeintzePair, ip: DInnerProduct, v: Sequence[Any]) -> float:
    """
    ||v|| = sum_j |v_j|^{1/lambda_j}.

    Args:
        pair: Diagonal Heintze pair
        ip: Inner product adapted to the layers
        v: Vector of the algebra

    Returns:
        The quasi-norm, zero exactly at v = 0

    Examples:
        >>> pair = diagonal_pair(LieAlgebra.heisenberg(), (1, 1, 2))
        >>> quasi_norm(pair, DInnerProduct.standard(pair), (2, 0, 4))
        4.0
    """
    validate_vector_length(v, pair.dim)
    return _layer_norms(pair, ip)(as_float_vector(v))


def quasi_distance(
    pair: DiagonalHeintzePair, ip: DInnerProduct, x: Sequence[Any], y: Sequence[Any]
) -> float:
    """rho(x, y) = ||x^{-1} * y||."""
    return quasi_norm(pair, ip, bch_multiply(pair.algebra, group_inverse(x), y))


def dilation_matrix(pair: DiagonalHeintzePair, t: float) -> np.ndarray:
    """Float matrix of e^{tD}."""
    out = np.zeros((pair.dim, pair.dim))
    for p, ev in zip(pair.projectors, pair.eigenvalues):
        out += math.exp(t * float(ev)) * np.array([[float(x) for x in row] for row in p])
    return out


def dilation(pair: DiagonalHeintzePair, t: float, x: Sequence[Any]) -> Tuple[float, ...]:
    """e^{tD} x."""
    validate_vector_length(x, pair.dim)
    return tuple(float(c) for c in dilation_matrix(pair, t) @ as_float_vector(x))


def carnot_dilation(pair: DiagonalHeintzePair, t: Any, x: Sequence[Any]) -> Tuple[Any, ...]:
    """
    delta_t x = sum_j t^j x_j for the Carnot grading.

    Exact when t and x are rational.

    Raises:
        NotCarnotTypeError: If the pair is not of Carnot type
        ValidationError: If t <= 0
    """
    validate_positive_number(t, "dilation factor")
    validate_vector_length(x, pair.dim)
    degrees = carnot_grading(pair)
    out = [ZERO] * pair.dim
    for p, j in zip(pair.projectors, degrees):
        component = mat_vec(p, x)
        scale = t**j
        out = [a + scale * c for a, c in zip(out, component)]
    return tuple(out)


def carnot_dilation_matrix(pair: DiagonalHeintzePair, t: Any) -> Matrix:
    degrees = carnot_grading(pair)
    n = pair.dim
    out = [[ZERO] * n for _ in range(n)]
    for p, j in zip(pair.projectors, degrees):
        for r in range(n):
            for c in range(n):
                if p[r][c]:
                    out[r][c] += t**j * p[r][c]
    return tuple(tuple(row) for row in out)


def homogeneous_dimension(pair: DiagonalHeintzePair) -> int:
    """
    Q = sum_j j dim V_j.

    Raises:
        NotCarnotTypeError: If the pair is not of Carnot type
    """
    return sum(j * layer.dim for j, layer in zip(carnot_grading(pair), pair.layers))


def _entries_exact(a: Sequence[Sequence[Any]]) -> bool:
    return all(isinstance(x, (int, Fraction)) for row in a for x in row)


def is_automorphism(pair: DiagonalHeintzePair, a: Sequence[Sequence[Any]]) -> bool:
    """A[e_i, e_j] = [A e_i, A e_j] for all basis pairs, checked exactly."""
    algebra = pair.algebra
    n = pair.dim
    columns = [tuple(row[i] for row in a) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            lhs = mat_vec(a, algebra.bracket(algebra.unit(i), algebra.unit(j)))
            rhs = algebra.bracket(columns[i], columns[j])
            if not all(is_exact_zero(p - q) for p, q in zip(lhs, rhs)):
                return False
    return True


def preserves_layers(pair: DiagonalHeintzePair, a: Sequence[Sequence[Any]]) -> bool:
    """A(V_j) contained in V_j for each layer (equal when A is invertible)."""
    for layer in pair.layers:
        forms = layer.space.annihilator()
        for row in layer.space.rows:
            image = mat_vec(a, row)
            pairings = (sum((f * x for f, x in zip(form, image)), ZERO) for form in forms)
            if not all(is_exact_zero(p) for p in pairings):
                return False
    return True


def exact_determinant(a: Sequence[Sequence[Any]]) -> Any:
    if _entries_exact(a):
        return determinant(a)
    return sympy.expand(sympy.Matrix([[to_sympy(x) for x in row] for row in a]).det())


def is_graded_automorphism(pair: DiagonalHeintzePair, a: Sequence[Sequence[Any]]) -> bool:
    """
    Check that A is a Lie algebra automorphism preserving every layer.

    Entries may be rationals or exact sympy numbers.

    Raises:
        SingularMatrixError: If A is not invertible
    """
    validate_square_matrix(a, pair.dim, "linear map")
    if is_exact_zero(exact_determinant(a)):
        raise SingularMatrixError("linear map is singular")
    return is_automorphism(pair, a) and preserves_layers(pair, a)


class GroupMap(ABC):
    """
    A map of the group to itself in exponential coordinates.

    Subclasses evaluate points and may supply their graded differential in
    closed form; bilipschitz optionally records claimed constants.
    """

    def __init__(
        self, pair: DiagonalHeintzePair, bilipschitz: Optional[Tuple[float, float]] = None
    ):
        self.pair = pair
        self.bilipschitz = bilipschitz

    @abstractmethod
    def __call__(self, x: Sequence[Any]) -> Tuple[Any, ...]:
        """Image of x."""

    def inverse(self) -> "GroupMap":
        raise ValidationError(f"{type(self).__name__} has no closed-form inverse")

    def differential(self, x: Sequence[Any]) -> Any:
        """Graded differential at x, by blow-up when no closed form exists."""
        from .pansu import pansu_differential

        return pansu_differential(self.pair, self, x).limit

    def then(self, outer: "GroupMap") -> "GroupMap":
        """outer o self."""
        return ComposedMap(outer, self)


class AffineMap(GroupMap):
    """
    x -> n * A x with A linear.

    A need not be graded; the differential exists only for graded A.
    """

    def __init__(
        self,
        pair: DiagonalHeintzePair,
        linear: Sequence[Sequence[Any]],
        translation: Optional[Sequence[Any]] = None,
        bilipschitz: Optional[Tuple[float, float]] = None,
    ):
        super().__init__(pair, bilipschitz)
        validate_square_matrix(linear, pair.dim, "linear part")
        self.linear = tuple(tuple(row) for row in linear)
        self.translation = tuple(translation) if translation is not None else pair.algebra.zero()
        validate_vector_length(self.translation, pair.dim, "translation")

    def __call__(self, x: Sequence[Any]) -> Tuple[Any, ...]:
        return bch_multiply(self.pair.algebra, self.translation, mat_vec(self.linear, x))

    def inverse(self) -> "AffineMap":
        a_inv = inverse(self.linear)
        return AffineMap(self.pair, a_inv, mat_vec(a_inv, group_inverse(self.translation)))

    def differential(self, x: Sequence[Any]) -> Matrix:
        if not preserves_layers(self.pair, self.linear):
            raise NonConvergentError("linear part mixes layers; blow-ups diverge")
        return self.linear

    def __repr__(self) -> str:
        return f"AffineMap(translation={self.translation}, linear={self.linear})"


class CallableMap(GroupMap):
    """An opaque evaluator, optionally with its inverse."""

    def __init__(
        self,
        pair: DiagonalHeintzePair,
        func: Callable[[Sequence[Any]], Sequence[Any]],
        inverse_func: Optional[Callable[[Sequence[Any]], Sequence[Any]]] = None,
        bilipschitz: Optional[Tuple[float, float]] = None,
    ):
        super().__init__(pair, bilipschitz)
        self.func = func
        self.inverse_func = inverse_func

    def __call__(self, x: Sequence[Any]) -> Tuple[Any, ...]:
        return tuple(self.func(x))

    def inverse(self) -> "CallableMap":
        if self.inverse_func is None:
            return super().inverse()
        return CallableMap(self.pair, self.inverse_func, self.func)


class ContactShear(GroupMap):
    """
    (x, y, z) -> (x, y + a x^2, z + a x^3 / 6) on the first Heisenberg group.

    A smooth contact map that is not affine; its graded differential at q is
    [[1, 0], [2 a q_x, 1]] on the first layer and 1 on the center.
    """

    def __init__(self, pair: DiagonalHeintzePair, a: Any):
        super().__init__(pair)
        if pair.dim != 3 or carnot_grading(pair) != (1, 2):
            raise ValidationError("ContactShear needs the graded first Heisenberg algebra")
        self.a = a

    def __call__(self, p: Sequence[Any]) -> Tuple[Any, ...]:
        x, y, z = p
        return (x, y + self.a * x * x, z + self.a * x * x * x / 6)

    def inverse(self) -> "ContactShear":
        return ContactShear(self.pair, -self.a)

    def differential(self, p: Sequence[Any]) -> Matrix:
        one = Fraction(1) if isinstance(p[0], (int, Fraction)) else 1.0
        zero = one * 0
        return ((one, zero, zero), (2 * self.a * p[0], one, zero), (zero, zero, one))


class ComposedMap(GroupMap):
    """outer o inner with the chain rule for differentials."""

    def __init__(self, outer: GroupMap, inner: GroupMap):
        super().__init__(inner.pair)
        self.outer = outer
        self.inner = inner

    def __call__(self, x: Sequence[Any]) -> Tuple[Any, ...]:
        return self.outer(self.inner(x))

    def inverse(self) -> "ComposedMap":
        return ComposedMap(self.inner.inverse(), self.outer.inverse())

    def differential(self, x: Sequence[Any]) -> Any:
        return _matmul_generic(self.outer.differential(self.inner(x)), self.inner.differential(x))


def _matmul_generic(a: Any, b: Any) -> Any:
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.asarray(a, dtype=float) @ np.asarray(b, dtype=float)
    return mat_mul(a, b)


def conjugate_map(f: GroupMap, g: GroupMap) -> GroupMap:
    """f o g o f^{-1}."""
    return ComposedMap(f, ComposedMap(g, f.inverse()))


def _sample_vectors(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    return rng.standard_normal((count, dim))


def empirical_bilip_constant(
    pair: DiagonalHeintzePair,
    ip: DInnerProduct,
    f: GroupMap,
    samples: int = Defaults.SAMPLES,
    seed: int = Defaults.SEED,
    exponents: Iterable[int] = Defaults.DILATION_EXPONENTS,
) -> Tuple[float, float]:
    """
    Extreme distortion ratios rho(f x, f y) / rho(x, y) over seeded samples.

    Each sample pair is also pushed through e^{sD} with e^s = 2^k for every
    exponent k, so maps that are not biLipschitz show ratios that grow as the
    exponent range widens.

    Args:
        pair: Diagonal Heintze pair
        ip: Layer-adapted inner product
        f: Map under test
        samples: Number of sample pairs
        seed: Seed of the sampling generator
        exponents: Base-2 exponents of the dilation factors

    Returns:
        (lower, upper) ratio estimates

    Raises:
        DegenerateSampleError: If a sample pair has rho(x, y) = 0
    """
    rng = np.random.default_rng(seed)
    xs = _sample_vectors(rng, samples, pair.dim)
    ys = _sample_vectors(rng, samples, pair.dim)
    norms = _layer_norms(pair, ip)
    algebra = pair.algebra
    lower, upper = math.inf, 0.0
    for k in exponents:
        m = dilation_matrix(pair, k * math.log(2.0))
        for x, y in zip(xs, ys):
            xt, yt = tuple(m @ x), tuple(m @ y)
            base = norms(as_float_vector(bch_multiply(algebra, group_inverse(xt), yt)))
            if base == 0.0:
                raise DegenerateSampleError("sample pair with rho(x, y) = 0")
            image = bch_multiply(algebra, group_inverse(f(xt)), f(yt))
            ratio = norms(as_float_vector(image)) / base
            lower, upper = min(lower, ratio), max(upper, ratio)
    logger.info("biLipschitz estimate [%.6g, %.6g] over %d samples", lower, upper, samples)
    return lower, upper


def quasi_triangle_constant(
    pair: DiagonalHeintzePair,
    ip: DInnerProduct,
    samples: int = Defaults.SAMPLES,
    seed: int = Defaults.SEED,
) -> float:
    """
    Largest observed rho(x, z) / (rho(x, y) + rho(y, z)).

    rho need not satisfy the triangle inequality; the measured constant is
    finite and reported.
    """
    rng = np.random.default_rng(seed)
    triples = rng.standard_normal((samples, 3, pair.dim))
    best = 0.0
    for x, y, z in triples:
        x, y, z = tuple(x), tuple(y), tuple(z)
        denominator = quasi_distance(pair, ip, x, y) + quasi_distance(pair, ip, y, z)
        if denominator > 0.0:
            best = max(best, quasi_distance(pair, ip, x, z) / denominator)
    logger.info("quasi-triangle constant %.6g over %d samples", best, samples)
    return best


@dataclass(frozen=True)
class HomogeneityReport:
    """Worst relative residuals of the homogeneity and left-invariance identities."""

    samples: int
    seed: int
    t_range: float
    homogeneity_error: float
    left_invariance_error: float
    tolerance: float
    witness: Optional[Dict[str, Any]] = None

    @property
    def ok(self) -> bool:
        return max(self.homogeneity_error, self.left_invariance_error) <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        out = {
            "samples": self.samples,
            "seed": self.seed,
            "t_range": self.t_range,
            "homogeneity_error": self.homogeneity_error,
            "left_invariance_error": self.left_invariance_error,
            "tolerance": self.tolerance,
            "ok": self.ok,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def homogeneity_check(
    pair: DiagonalHeintzePair,
    ip: DInnerProduct,
    samples: int = Defaults.SAMPLES,
    seed: int = Defaults.SEED,
    t_range: float = Defaults.T_RANGE,
    tolerance: float = Tolerance.HOMOGENEITY,
) -> HomogeneityReport:
    """
    Relative residuals of rho(e^{tD}x, e^{tD}y) = e^t rho(x, y) and
    rho(n*x, n*y) = rho(x, y) over seeded samples, t uniform in [-t_range, t_range].

    The report carries the worst sample as a witness when a residual exceeds
    the tolerance.

    Raises:
        DegenerateSampleError: If a sample pair has rho(x, y) = 0
    """
    validate_positive_number(samples, "samples")
    rng = np.random.default_rng(seed)
    algebra = pair.algebra
    norms = _layer_norms(pair, ip)

    def rho(x: Sequence[float], y: Sequence[float]) -> float:
        return norms(as_float_vector(bch_multiply(algebra, group_inverse(x), y)))

    worst_h, worst_l = 0.0, 0.0
    witness: Optional[Dict[str, Any]] = None
    for _ in range(samples):
        x, y, n = (tuple(float(c) for c in rng.standard_normal(pair.dim)) for _ in range(3))
        t = float(rng.uniform(-t_range, t_range))
        base = rho(x, y)
        if base == 0.0:
            raise DegenerateSampleError("sample pair with rho(x, y) = 0")
        m = dilation_matrix(pair, t)
        scaled = rho(tuple(m @ np.array(x)), tuple(m @ np.array(y)))
        h_err = abs(scaled - math.exp(t) * base) / (math.exp(t) * base)
        moved = rho(bch_multiply(algebra, n, x), bch_multiply(algebra, n, y))
        l_err = abs(moved - base) / base
        if max(h_err, l_err) > max(worst_h, worst_l):
            witness = {"x": list(x), "y": list(y), "n": list(n), "t": t}
        worst_h, worst_l = max(worst_h, h_err), max(worst_l, l_err)
    logger.info(
        "homogeneity residual %.3g, left invariance residual %.3g over %d samples",
        worst_h,
        worst_l,
        samples,
    )
    failed = max(worst_h, worst_l) > tolerance
    return HomogeneityReport(
        samples, seed, t_range, worst_h, worst_l, tolerance, witness if failed else None
    )


__all__ = [
    "DInnerProduct",
    "as_float_vector",
    "quasi_norm",
    "quasi_distance",
    "dilation_matrix",
    "dilation",
    "carnot_dilation",
    "carnot_dilation_matrix",
    "homogeneous_dimension",
    "is_automorphism",
    "preserves_layers",
    "exact_determinant",
    "is_graded_automorphism",
    "GroupMap",
    "AffineMap",
    "CallableMap",
    "ContactShear",
    "ComposedMap",
    "conjugate_map",
    "empirical_bilip_constant",
    "quasi_triangle_constant",
    "HomogeneityReport",
    "homogeneity_check",
]
