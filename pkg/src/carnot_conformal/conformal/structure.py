"""
Conformal structures on the first layer

A conformal structure assigns to each point a value in SL(m)/SO(m), m the
dimension of the first layer. Maps pull structures back through the first
layer block of their graded differential; orbits of a group at a point are
enclosed by their circumcenter to produce an invariant structure.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..algebra.heintze import DiagonalHeintzePair, PreservedFlag, check_flag_preserved, induced_pair
from ..algebra.linalg import Subspace, mat_vec
from ..constants import Defaults, Tolerance
from ..exceptions import OrbitNotStableError, ValidationError
from ..metric.homogeneous import DInnerProduct, GroupMap, conjugate_map
from ..metric.symmetric_space import SpdPoint, act, circumcenter, dilatation, distance
from .similarity import GeneratedGroup, SimilarityElement

logger = logging.getLogger(__name__)

StructureField = Callable[[Sequence[Any]], SpdPoint]


@dataclass(frozen=True)
class ConformalPoint:
    """Value of a conformal structure at a base point."""

    x: Tuple[Any, ...]
    value: SpdPoint


def constant_field(value: SpdPoint) -> StructureField:
    return lambda x: value


def layer_block(space: Subspace, linear: Any) -> np.ndarray:
    """
    Matrix of a layer-preserving map restricted to a subspace, in its echelon basis.

    Coordinates are read off at the pivot columns, which is valid because the
    image of every basis row lies in the subspace.
    """
    block = np.zeros((space.dim, space.dim))
    for a, row in enumerate(space.rows):
        image = mat_vec(linear, row)
        for b, p in enumerate(space.pivots):
            block[b, a] = float(image[p])
    return block


def first_layer_block(pair: DiagonalHeintzePair, linear: Any) -> np.ndarray:
    return layer_block(pair.first_layer.space, linear)


def pullback(
    pair: DiagonalHeintzePair, g: GroupMap, value_at_image: SpdPoint, x: Sequence[Any]
) -> SpdPoint:
    """
    g*mu(x) = (Dg(x)|_{V_1})^T [mu(g(x))].

    Args:
        pair: Carnot-type pair
        g: Map with a graded differential
        value_at_image: mu(g(x))
        x: Base point

    Raises:
        NonConvergentError: If the differential cannot be computed
    """
    block = first_layer_block(pair, g.differential(x))
    return act(block.T, value_at_image)


def pullback_field(pair: DiagonalHeintzePair, g: GroupMap, field: StructureField) -> StructureField:
    """The structure x -> g*mu(x)."""
    return lambda x: pullback(pair, g, field(g(x)), x)


def fiber_pullback(
    pair: DiagonalHeintzePair,
    flag: PreservedFlag,
    i: int,
    g: SimilarityElement,
    value_at_image: SpdPoint,
) -> SpdPoint:
    """
    Pullback on the quotient n_i / n_{i-1} through the induced differential.

    The value is a point of SL(m_i)/SO(m_i), m_i the dimension of the first
    layer of the induced pair.

    Raises:
        FlagNotPreservedError: If the linear part of g moves a flag member
        IndexOutOfRangeError: If i is outside 1..s
    """
    quotient = induced_pair(pair, flag, i)
    step = flag.steps[i - 1]
    linear = g.linear_part
    check_flag_preserved(flag, g.linear)
    q = quotient.dim
    sub = step.subquotient
    columns = [sub.project(mat_vec(linear, sub.lift(quotient.algebra.unit(a)))) for a in range(q)]
    induced = tuple(tuple(col[r] for col in columns) for r in range(q))
    block = first_layer_block(quotient, induced)
    return act(block.T, value_at_image)


def _canonical_key(point: SpdPoint) -> Tuple[float, ...]:
    return tuple(np.round(point.matrix, 9).ravel().tolist())


def deduplicate(
    points: Sequence[SpdPoint], threshold: float = Tolerance.DEDUPLICATION
) -> List[SpdPoint]:
    """Drop points within threshold of an earlier one, then sort canonically."""
    kept: List[SpdPoint] = []
    for p in points:
        if all(distance(p, q) >= threshold for q in kept):
            kept.append(p)
    return sorted(kept, key=_canonical_key)


@dataclass(frozen=True)
class Orbit:
    """Deduplicated pullback values at a point over all words up to a cap."""

    points: Tuple[SpdPoint, ...]
    diameter: float
    word_cap: int
    element_count: int


def _diameter(points: Sequence[SpdPoint]) -> float:
    return max(
        (distance(p, q) for idx, p in enumerate(points) for q in points[idx + 1 :]), default=0.0
    )


def orbit_structure(
    group: GeneratedGroup,
    field: StructureField,
    x: Sequence[Any],
    word_cap: int = Defaults.WORD_CAP,
) -> Orbit:
    """
    M_x = {g*mu_0(x) : g a word of length <= word_cap}.

    Args:
        group: Generated similarity group
        field: The structure mu_0
        x: Base point
        word_cap: Largest word length

    Returns:
        The deduplicated, canonically sorted orbit and its diameter
    """
    elements = group.elements(word_cap)
    values = [pullback(group.pair, g, field(g(x)), x) for g in elements]
    points = deduplicate(values)
    orbit = Orbit(tuple(points), _diameter(points), word_cap, len(elements))
    logger.debug(
        "orbit at cap %d: %d elements, %d points, diameter %.6g",
        word_cap,
        len(elements),
        len(points),
        orbit.diameter,
    )
    return orbit


def invariant_structure(
    group: GeneratedGroup,
    field: StructureField,
    x: Sequence[Any],
    word_cap: int = Defaults.WORD_CAP,
    tol: float = Defaults.TOL,
) -> ConformalPoint:
    """
    mu(x) = circumcenter of M_x.

    Raises:
        OrbitNotStableError: If the orbit diameter changes between caps k and k + 1
    """
    small = orbit_structure(group, field, x, word_cap)
    large = orbit_structure(group, field, x, word_cap + 1)
    if abs(large.diameter - small.diameter) > Tolerance.DEDUPLICATION:
        raise OrbitNotStableError(
            f"orbit diameter grows from {small.diameter:.6g} to {large.diameter:.6g}"
            f" at cap {word_cap + 1}"
        )
    center = circumcenter(list(large.points), tol)
    return ConformalPoint(tuple(x), center.center)


def invariance_residual(
    group: GeneratedGroup,
    field: StructureField,
    x: Sequence[Any],
    word_cap: int = Defaults.WORD_CAP,
    tol: float = Defaults.TOL,
) -> float:
    """max over group elements g of d(g*mu(x), mu(x)) for the invariant mu."""
    mu_x = invariant_structure(group, field, x, word_cap, tol).value
    worst = 0.0
    for g in group.elements(word_cap):
        mu_gx = invariant_structure(group, field, g(x), word_cap, tol).value
        worst = max(worst, distance(pullback(group.pair, g, mu_gx, x), mu_x))
    return worst


@dataclass(frozen=True)
class BlowupReport:
    """Dilatations of F_j g F_j^{-1} along a blow-up sequence."""

    scales: Tuple[float, ...]
    k_values: Tuple[float, ...]

    @property
    def k_last(self) -> float:
        return self.k_values[-1]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scales": list(self.scales),
            "k_values": list(self.k_values),
            "k_last": self.k_last,
        }


def blowup_demo(
    pair: DiagonalHeintzePair,
    g: GroupMap,
    h_sequence: Sequence[GroupMap],
    s_sequence: Sequence[float],
    points: Sequence[Sequence[Any]],
    ip: Optional[DInnerProduct] = None,
) -> BlowupReport:
    """
    K values of g_j = F_j g F_j^{-1} with F_j = e^{s_j D} o h_j.

    Each K is the largest dilatation of the first layer block of the
    differential of g_j over the sample points.

    Raises:
        ValidationError: If the h and s sequences differ in length
    """
    if len(h_sequence) != len(s_sequence):
        raise ValidationError("h and s sequences must have the same length")
    gram = ip.restricted_gram(pair.first_layer.space) if ip is not None else None
    values = []
    for h, s in zip(h_sequence, s_sequence):
        f = h.then(SimilarityElement.dilation(pair, float(np.exp(s))))
        conjugated = conjugate_map(f, g)
        k = max(
            dilatation(first_layer_block(pair, conjugated.differential(x)), gram) for x in points
        )
        values.append(k)
    logger.info("blow-up dilatations %s", ["%.6g" % k for k in values])
    return BlowupReport(tuple(float(s) for s in s_sequence), tuple(values))


__all__ = [
    "ConformalPoint",
    "StructureField",
    "constant_field",
    "layer_block",
    "first_layer_block",
    "pullback",
    "pullback_field",
    "fiber_pullback",
    "deduplicate",
    "Orbit",
    "orbit_structure",
    "invariant_structure",
    "invariance_residual",
    "BlowupReport",
    "blowup_demo",
]
