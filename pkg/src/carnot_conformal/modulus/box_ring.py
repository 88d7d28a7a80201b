"""
Box rings and their segment-family modulus

A box ring on a Carnot group in layer coordinates x_jl: the slab face C0 is
{x_11 = 0, |x_jl| <= w_jl otherwise} and a diagonal graded map f scales x_jl
by lambda_jl. The modulus of the segment family crossing the ring, the
volume bound of its image, the BCH padding polynomials that keep the
delta-neighbourhood of f(C0) inside the padded box, and the determinant
rigidity J <= lambda_11^Q are evaluated here in closed form. Rational inputs
give exact Fraction results.
"""

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from ..algebra.bch import bch_multiply
from ..algebra.heintze import DiagonalHeintzePair, carnot_grading
from ..constants import Defaults, Tolerance
from ..exceptions import NotDiagonalFormError, ValidationError
from ..metric.homogeneous import (
    DInnerProduct,
    carnot_dilation,
    homogeneous_dimension,
    is_graded_automorphism,
    quasi_norm,
)
from ..utils import (
    format_exact,
    is_exact,
    parse_rational,
    to_sympy,
    validate_positive_number,
    validate_probability,
)

logger = logging.getLogger(__name__)

LayerValues = Tuple[Tuple[Any, ...], ...]

DELTA = sympy.Symbol("delta", positive=True)


def coordinate_index(pair: DiagonalHeintzePair) -> Tuple[Tuple[int, ...], ...]:
    """
    Coordinate of x_jl for each layer j and position l.

    Raises:
        ValidationError: If some layer is not spanned by coordinate vectors
    """
    out = []
    for i, layer in enumerate(pair.layers):
        for row, p in zip(layer.space.rows, layer.space.pivots):
            if any(x for k, x in enumerate(row) if k != p):
                raise ValidationError(f"layer {i + 1} is not spanned by coordinate vectors")
        out.append(tuple(layer.space.pivots))
    return tuple(out)


def _shape_matches(pair: DiagonalHeintzePair, values: LayerValues, name: str) -> None:
    dims = tuple(layer.dim for layer in pair.layers)
    if tuple(len(v) for v in values) != dims:
        shape = [len(v) for v in values]
        raise ValidationError(f"{name} has shape {shape}, layers have {list(dims)}")


def _exact(value: Any) -> Any:
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    return value


@dataclass(frozen=True)
class BoxRing:
    """
    Box ring data on a coordinate-adapted Carnot pair.

    widths[j][l] is the half-width w_jl of C0; widths[0][0] is not used by
    C0 itself since the slab face sits at x_11 = 0. lambdas[j][l] is the
    factor of the diagonal graded map f on x_jl, sorted decreasingly within
    each layer. padding[j][l] is P_jl(delta) for the padded box Y.

    Raises:
        ValidationError: If shapes disagree with the layers, values are not
            positive or lambdas are not sorted within a layer
    """

    pair: DiagonalHeintzePair
    widths: LayerValues
    delta: Any
    lambdas: LayerValues
    padding: Optional[LayerValues] = field(default=None)

    def __post_init__(self):
        carnot_grading(self.pair)
        coordinate_index(self.pair)
        widths = tuple(tuple(_exact(w) for w in row) for row in self.widths)
        object.__setattr__(self, "widths", widths)
        lambdas = tuple(tuple(_exact(x) for x in row) for row in self.lambdas)
        object.__setattr__(self, "lambdas", lambdas)
        object.__setattr__(self, "delta", _exact(self.delta))
        validate_positive_number(self.delta, "delta")
        _shape_matches(self.pair, self.widths, "widths")
        _shape_matches(self.pair, self.lambdas, "lambdas")
        for row in self.widths:
            for w in row:
                validate_positive_number(w, "half-width")
        for j, row in enumerate(self.lambdas):
            for x in row:
                validate_positive_number(x, "lambda")
            if any(b > a for a, b in zip(row, row[1:])):
                raise ValidationError(f"lambdas of layer {j + 1} are not sorted decreasingly")
        if self.padding is not None:
            padding = tuple(tuple(_exact(p) for p in row) for row in self.padding)
            object.__setattr__(self, "padding", padding)
            _shape_matches(self.pair, self.padding, "padding")
        if not self.delta_small:
            logger.warning("delta %s is not below the smallest half-width", self.delta)

    @property
    def degrees(self) -> Tuple[int, ...]:
        return carnot_grading(self.pair)

    @property
    def homogeneous_dimension(self) -> int:
        return homogeneous_dimension(self.pair)

    @property
    def lambda_11(self) -> Any:
        return self.lambdas[0][0]

    @property
    def delta_small(self) -> bool:
        return self.delta < min(w for row in self.widths for w in row)

    def _padding_at(self, j: int, l: int) -> Any:
        return self.padding[j][l] if self.padding is not None else Fraction(0)

    def slice_area(self, padded: bool = False) -> Any:
        """
        Product of full widths over every coordinate except x_11.

        With padded=True each half-width w_jl is replaced by w_jl + P_jl(delta).
        """
        area: Any = Fraction(1)
        for j, row in enumerate(self.widths):
            for l, w in enumerate(row):
                if (j, l) == (0, 0):
                    continue
                half = w + self._padding_at(j, l) if padded else w
                area = area * 2 * half
        return area

    def to_dict(self) -> Dict[str, Any]:
        out = {
            "widths": [[_format(w) for w in row] for row in self.widths],
            "delta": _format(self.delta),
            "lambdas": [[_format(x) for x in row] for row in self.lambdas],
            "homogeneous_dimension": self.homogeneous_dimension,
        }
        if self.padding is not None:
            out["padding"] = [[_format(p) for p in row] for row in self.padding]
        return out


def _format(value: Any) -> Any:
    if is_exact(value):
        return format_exact(value)
    return float(value)


def _power(base: Any, exponent: int) -> Any:
    if isinstance(base, Fraction):
        return base**exponent
    return float(base) ** exponent


@dataclass(frozen=True)
class SegmentModulus:
    """Modulus of one segment family and the doubled lower bound for the ring."""

    per_family: Any
    lower_bound: Any

    def to_dict(self) -> Dict[str, Any]:
        return {"per_family": _format(self.per_family), "lower_bound": _format(self.lower_bound)}


def segment_family_modulus(ring: BoxRing) -> SegmentModulus:
    """
    M(Gamma_1) = L(C0) (delta / lambda_11)^{1 - Q}, and the ring bound 2 M(Gamma_1).

    Examples:
        >>> pair = diagonal_pair(LieAlgebra.heisenberg(), (1, 1, 2))
        >>> ring = BoxRing(pair, ((1, 1), (1,)), Fraction(1, 2), ((1, 1), (1,)))
        >>> segment_family_modulus(ring).per_family
        Fraction(32, 1)
    """
    q = ring.homogeneous_dimension
    per_family = ring.slice_area() * _power(ring.delta / ring.lambda_11, 1 - q)
    return SegmentModulus(per_family, 2 * per_family)


def upper_volume_bound(ring: BoxRing, jacobian: Any) -> Any:
    """
    J L(F) 2 (delta / lambda_11) / delta^Q with L(F) the padded slice area.

    Raises:
        ValidationError: If J <= 0
    """
    validate_positive_number(jacobian, "Jacobian")
    q = ring.homogeneous_dimension
    scale = ring.delta / ring.lambda_11
    return _exact(jacobian) * ring.slice_area(padded=True) * 2 * scale / _power(ring.delta, q)


def rescale_ring(ring: BoxRing, t: Any) -> BoxRing:
    """The image of the ring under delta_t: w_jl -> t^j w_jl, delta -> t delta."""
    validate_positive_number(t, "dilation factor")
    t = _exact(t)
    widths = tuple(tuple(w * t**j for w in row) for j, row in zip(ring.degrees, ring.widths))
    padding = None
    if ring.padding is not None:
        padding = tuple(tuple(p * t**j for p in row) for j, row in zip(ring.degrees, ring.padding))
    return replace(ring, widths=widths, delta=ring.delta * t, padding=padding)


# ==============================================================================
# Padding polynomials
# ==============================================================================


@dataclass(frozen=True)
class PaddingTable:
    """P_jl(delta) as sympy polynomials in delta, one per layer coordinate."""

    polynomials: Tuple[Tuple[sympy.Expr, ...], ...]

    def evaluate(self, delta: Any) -> LayerValues:
        if isinstance(delta, Fraction):
            value = sympy.Rational(delta.numerator, delta.denominator)
        else:
            value = delta
        out = []
        for row in self.polynomials:
            values = []
            for p in row:
                v = sympy.sympify(p.subs(DELTA, value))
                values.append(Fraction(int(v.p), int(v.q)) if v.is_Rational else float(v))
            out.append(tuple(values))
        return tuple(out)

    def constant_terms(self) -> Tuple[Tuple[sympy.Expr, ...], ...]:
        return tuple(tuple(p.subs(DELTA, 0) for p in row) for row in self.polynomials)

    def to_dict(self) -> Dict[str, Any]:
        return {
            f"P{j + 1}{l + 1}": [
                format_exact(sympy.Rational(c)) for c in sympy.Poly(p, DELTA).all_coeffs()[::-1]
            ]
            for j, row in enumerate(self.polynomials)
            for l, p in enumerate(row)
        }


def _monomial_bound(
    term: sympy.Expr, bounds: Dict[sympy.Symbol, sympy.Expr]
) -> sympy.Expr:
    coeff, factors = term.as_coeff_mul()
    out = abs(coeff)
    for f in factors:
        base, exp = f.as_base_exp()
        out *= bounds[base] ** exp
    return out


def padding_polynomials(
    pair: DiagonalHeintzePair,
    lambdas: LayerValues,
    widths: Optional[LayerValues] = None,
) -> PaddingTable:
    """
    Bound the BCH correction Q_jl = (y * z)_jl - y_jl coefficient-wise.

    y ranges over |y_jl| <= lambda_jl w_jl and z over |z_jl| <= delta^j; each
    monomial of Q_jl is bounded by the absolute value of its coefficient
    times the product of those bounds, and P_jl = bound / lambda_jl. Every
    monomial contains a z factor, so P_jl has no constant term.

    Args:
        pair: Coordinate-adapted Carnot pair
        lambdas: Factors lambda_jl per layer
        widths: Half-widths w_jl, all 1 when omitted
    """
    degrees = carnot_grading(pair)
    index = coordinate_index(pair)
    _shape_matches(pair, lambdas, "lambdas")
    if widths is None:
        widths = tuple(tuple(1 for _ in row) for row in lambdas)
    n = pair.dim
    ys = sympy.symbols(f"y0:{n}")
    zs = sympy.symbols(f"z0:{n}")
    bounds: Dict[sympy.Symbol, sympy.Expr] = {}
    for j, coords, lam_row, w_row in zip(degrees, index, lambdas, widths):
        for c, lam, w in zip(coords, lam_row, w_row):
            bounds[ys[c]] = to_sympy(_exact(lam)) * to_sympy(_exact(w))
            bounds[zs[c]] = DELTA**j
    product = bch_multiply(pair.algebra, ys, zs)
    table = []
    for coords, lam_row in zip(index, lambdas):
        row = []
        for c, lam in zip(coords, lam_row):
            correction = sympy.expand(product[c] - ys[c])
            terms = sympy.Add.make_args(correction)
            total = sum((_monomial_bound(t, bounds) for t in terms), sympy.Integer(0))
            row.append(sympy.expand(total / to_sympy(_exact(lam))))
        table.append(tuple(row))
    logger.debug("padding polynomials %s", table)
    return PaddingTable(tuple(table))


def padding_from_polynomials(ring: BoxRing, table: Optional[PaddingTable] = None) -> BoxRing:
    """The ring with P_jl(delta) from the table (computed when omitted)."""
    if table is None:
        table = padding_polynomials(ring.pair, ring.lambdas, ring.widths)
    return replace(ring, padding=table.evaluate(ring.delta))


def first_layer_padding(ring: BoxRing, table: Optional[PaddingTable] = None) -> BoxRing:
    """
    The ring padded by P_1l(delta) on the first layer and by zero above it.

    First-layer coordinates of y * z are y + z, so any escape from this box
    comes from a bracket term.
    """
    padded = padding_from_polynomials(ring, table)
    return replace(
        padded,
        padding=(padded.padding[0],) + tuple(tuple(0 for _ in row) for row in padded.padding[1:]),
    )


# ==============================================================================
# Inclusion and rigidity
# ==============================================================================


@dataclass(frozen=True)
class InclusionResult:
    """Outcome of sampling the delta-neighbourhood of f(C0) against f(Y)."""

    ok: bool
    samples: int
    witness: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"ok": self.ok, "samples": self.samples, "witness": self.witness}


def _sample_face_point(
    ring: BoxRing, index, rng: np.random.Generator, face_fraction: float
) -> np.ndarray:
    y = np.zeros(ring.pair.dim)
    for j, (coords, w_row, lam_row) in enumerate(zip(index, ring.widths, ring.lambdas)):
        for l, (c, w, lam) in enumerate(zip(coords, w_row, lam_row)):
            if (j, l) == (0, 0):
                continue
            bound = float(lam) * float(w)
            if rng.random() < face_fraction:
                y[c] = bound * rng.choice((-1.0, 1.0))
            else:
                y[c] = rng.uniform(-bound, bound)
    return y


def _sample_ball_point(ring: BoxRing, ip: DInnerProduct, rng: np.random.Generator) -> np.ndarray:
    u = rng.uniform(-1.0, 1.0, size=ring.pair.dim)
    norm = quasi_norm(ring.pair, ip, u)
    if norm == 0.0:
        return np.zeros(ring.pair.dim)
    factor = float(ring.delta) * rng.uniform(0.0, 1.0) / norm
    if factor <= 0.0:
        return np.zeros(ring.pair.dim)
    return np.array(carnot_dilation(ring.pair, factor, tuple(u)), dtype=float)


def inclusion_check(
    ring: BoxRing,
    samples: int = Defaults.INCLUSION_SAMPLES,
    seed: int = Defaults.SEED,
    ip: Optional[DInnerProduct] = None,
    face_fraction: float = 0.5,
) -> InclusionResult:
    """
    Sample w = y * z with y on f(C0) and rho(0, z) <= delta and test w in f(Y).

    f(Y) is |w_jl| <= lambda_jl (w_jl + P_jl(delta)), with the x_11 half-width
    of Y being P_11(delta) alone. Each y coordinate is pushed to a face of
    f(C0) with probability face_fraction.

    Returns:
        ok=False with the first escaping sample described by _inclusion_witness
    """
    validate_positive_number(samples, "samples")
    validate_probability(face_fraction, "face fraction")
    ip = ip or DInnerProduct.standard(ring.pair)
    index = coordinate_index(ring.pair)
    rng = np.random.default_rng(seed)
    limits = []
    for j, (coords, w_row, lam_row) in enumerate(zip(index, ring.widths, ring.lambdas)):
        for l, (c, w, lam) in enumerate(zip(coords, w_row, lam_row)):
            base = 0 if (j, l) == (0, 0) else float(w)
            limits.append((c, j, l, float(lam) * (base + float(ring._padding_at(j, l)))))
    for k in range(samples):
        y = _sample_face_point(ring, index, rng, face_fraction)
        z = _sample_ball_point(ring, ip, rng)
        w = bch_multiply(ring.pair.algebra, tuple(y), tuple(z))
        escaped = [
            (c, j, l, limit)
            for c, j, l, limit in limits
            if abs(w[c]) > limit * (1 + Tolerance.BOX_SLACK) + Tolerance.BOX_SLACK
        ]
        if escaped:
            witness = _inclusion_witness(escaped, y, z, w, k)
            logger.info(
                "box inclusion fails at sample %d on %s", k, ", ".join(witness["escaped"])
            )
            return InclusionResult(False, k + 1, witness)
    return InclusionResult(True, samples)


def _inclusion_witness(escaped, y: np.ndarray, z: np.ndarray, w, sample: int) -> Dict[str, Any]:
    """
    Describe an escaping sample by its deepest escaping coordinate.

    bracket_term is w - y - z on that coordinate, the part of the BCH product
    coming from brackets; it is zero on the first layer.
    """
    c, j, l, limit = escaped[-1]
    return {
        "coordinate": f"x{j + 1}{l + 1}",
        "value": float(w[c]),
        "bound": limit,
        "linear_term": float(y[c] + z[c]),
        "bracket_term": float(w[c] - y[c] - z[c]),
        "escaped": [f"x{jj + 1}{ll + 1}" for _, jj, ll, _bound in escaped],
        "y": y.tolist(),
        "z": z.tolist(),
        "w": [float(x) for x in w],
        "sample": sample,
    }


@dataclass(frozen=True)
class RigidityReport:
    """J = |det A| against lambda_11^Q for a diagonal graded A."""

    jacobian: Any
    lambda_11_q: Any
    holds: bool
    equality: bool
    similarity: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "J": _format(self.jacobian),
            "lambda11^Q": _format(self.lambda_11_q),
            "holds": self.holds,
            "equality": self.equality,
            "similarity": self.similarity,
        }


def rigidity_check(pair: DiagonalHeintzePair, a: Sequence[Sequence[Any]]) -> RigidityReport:
    """
    Compare J = prod |a_ii| with lambda_11^Q, lambda_11 the largest first-layer factor.

    Raises:
        NotDiagonalFormError: If A is not a diagonal graded automorphism in
            the layer coordinates
    """
    coordinate_index(pair)
    n = pair.dim
    if any(a[r][c] != 0 for r in range(n) for c in range(n) if r != c):
        raise NotDiagonalFormError("linear map has off-diagonal entries")
    if not is_graded_automorphism(pair, a):
        raise NotDiagonalFormError("diagonal map is not a graded automorphism")
    factors = [abs(_exact(a[i][i])) for i in range(n)]
    jacobian: Any = Fraction(1)
    for f in factors:
        jacobian = jacobian * f
    first = [factors[c] for c in pair.first_layer.space.pivots]
    lam = max(first)
    lam_q = _power(lam, homogeneous_dimension(pair))
    exact = all(isinstance(x, Fraction) for x in factors)
    slack = 0 if exact else Tolerance.BOX_SLACK
    holds = jacobian <= lam_q * (1 + slack)
    equality = abs(jacobian - lam_q) <= slack * lam_q
    similarity = all(abs(x - lam) <= slack * lam for x in first)
    return RigidityReport(jacobian, lam_q, bool(holds), bool(equality), bool(similarity))


def layer_singular_values(
    pair: DiagonalHeintzePair, ip: DInnerProduct, a: Sequence[Sequence[Any]]
) -> Tuple[Tuple[float, ...], ...]:
    """
    Singular values of each layer block of a graded map, decreasing.

    This is the frame in which a non-diagonal graded map is put into the
    diagonal normal form of the box ring.
    """
    out = []
    for layer in pair.layers:
        rows = layer.space.rows
        coords = [[float(x) for x in layer.space.coordinates(_apply(a, u))] for u in rows]
        block = np.array(coords).T
        gram = np.array([[float(ip.inner(u, v)) for v in rows] for u in rows])
        w, v = np.linalg.eigh(gram)
        root = v @ np.diag(np.sqrt(w)) @ v.T
        inv_root = v @ np.diag(1.0 / np.sqrt(w)) @ v.T
        singular = np.linalg.svd(root @ block @ inv_root, compute_uv=False)
        out.append(tuple(float(s) for s in singular))
    return tuple(out)


def _apply(a: Sequence[Sequence[Any]], u: Sequence[Any]) -> List[Any]:
    return [sum((x * y for x, y in zip(row, u)), Fraction(0)) for row in a]


def ring_for_map(
    pair: DiagonalHeintzePair,
    ip: DInnerProduct,
    a: Sequence[Sequence[Any]],
    widths: LayerValues,
    delta: Any,
) -> BoxRing:
    """Box ring whose lambdas are the per-layer singular values of a graded map."""
    return BoxRing(pair, widths, delta, layer_singular_values(pair, ip, a))


__all__ = [
    "DELTA",
    "LayerValues",
    "coordinate_index",
    "BoxRing",
    "SegmentModulus",
    "segment_family_modulus",
    "upper_volume_bound",
    "rescale_ring",
    "PaddingTable",
    "padding_polynomials",
    "padding_from_polynomials",
    "first_layer_padding",
    "InclusionResult",
    "inclusion_check",
    "RigidityReport",
    "rigidity_check",
    "layer_singular_values",
    "ring_for_map",
]
