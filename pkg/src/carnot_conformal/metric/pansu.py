"""
Numerical Pansu differentials

The blow-ups v -> delta_{1/t}(f(p)^{-1} * f(p * delta_t v)) of a map f at p
converge to its graded differential as t -> 0. Each blow-up is linearized
from the points +-e_i and the sequence is extrapolated to t = 0.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Sequence, Tuple

import numpy as np

from ..algebra.bch import bch_multiply, group_inverse
from ..algebra.heintze import DiagonalHeintzePair, carnot_grading
from ..constants import Defaults, Tolerance
from ..exceptions import NonConvergentError, ValidationError
from ..utils import validate_non_empty_list, validate_vector_length
from .homogeneous import GroupMap, carnot_dilation

logger = logging.getLogger(__name__)

LinearMap = Tuple[Tuple[Any, ...], ...]


@dataclass(frozen=True)
class PansuResult:
    """Blow-up linearizations per scale and their extrapolated limit."""

    scales: Tuple[Any, ...]
    maps: Tuple[LinearMap, ...]
    limit: LinearMap
    error: float

    @property
    def exact(self) -> bool:
        return all(isinstance(x, Fraction) for row in self.limit for x in row)


def blowup_linearization(
    pair: DiagonalHeintzePair, f: GroupMap, p: Sequence[Any], t: Any
) -> LinearMap:
    """
    Least-squares linear fit of the blow-up at scale t on the points +-e_i.

    For these sample points the fit is the symmetric difference
    (w(e_i) - w(-e_i)) / 2 column by column.
    """
    algebra = pair.algebra
    fp_inv = group_inverse(f(p))
    inv_t = 1 / t
    columns = []
    for i in range(pair.dim):
        images = []
        for sign in (1, -1):
            v = tuple(sign * x for x in algebra.unit(i))
            moved = f(bch_multiply(algebra, p, carnot_dilation(pair, t, v)))
            images.append(carnot_dilation(pair, inv_t, bch_multiply(algebra, fp_inv, moved)))
        columns.append([(a - b) / 2 for a, b in zip(*images)])
    return tuple(tuple(col[r] for col in columns) for r in range(pair.dim))


def _neville_at_zero(scales: Sequence[Any], values: Sequence[Any]) -> Tuple[Any, Any]:
    """Polynomial extrapolation to 0; returns (limit, previous diagonal entry)."""
    table: List[Any] = list(values)
    k = len(scales)
    diagonal = [table[-1]]
    for level in range(1, k):
        for i in range(k - level):
            ti, tk = scales[i], scales[i + level]
            table[i] = (ti * table[i + 1] - tk * table[i]) / (ti - tk)
        diagonal.append(table[0])
    return table[0], diagonal[-2] if len(diagonal) > 1 else table[0]


def pansu_differential(
    pair: DiagonalHeintzePair,
    f: GroupMap,
    p: Sequence[Any],
    scales: Sequence[Any] = Defaults.PANSU_SCALES,
    tol: float = Tolerance.PANSU,
) -> PansuResult:
    """
    Graded differential of f at p by blow-up and Richardson extrapolation.

    Exact rational scales, points and maps keep every step exact.

    Args:
        pair: Carnot-type pair
        f: Map to differentiate
        p: Base point
        scales: Decreasing positive scales t
        tol: Largest accepted change between the last two extrapolants

    Returns:
        Per-scale linearizations and the extrapolated limit

    Raises:
        NotCarnotTypeError: If the pair is not of Carnot type
        NonConvergentError: If the extrapolation has not settled within tol
    """
    carnot_grading(pair)
    validate_vector_length(p, pair.dim, "base point")
    validate_non_empty_list(scales, "scales")
    if any(b >= a for a, b in zip(scales, scales[1:])):
        raise ValidationError("scales must decrease")
    maps = tuple(blowup_linearization(pair, f, p, t) for t in scales)
    n = pair.dim
    limit_rows = []
    error = 0.0
    for r in range(n):
        row = []
        for c in range(n):
            value, previous = _neville_at_zero(scales, [m[r][c] for m in maps])
            error = max(error, abs(float(value - previous)))
            row.append(value)
        limit_rows.append(tuple(row))
    logger.debug("Pansu extrapolation residual %.3g over %d scales", error, len(scales))
    if error > tol:
        raise NonConvergentError(f"blow-up extrapolation changed by {error:.3g} > {tol:.3g}")
    return PansuResult(tuple(scales), maps, tuple(limit_rows), error)


def as_array(linear: Any) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in linear], dtype=float)


__all__ = ["PansuResult", "blowup_linearization", "pansu_differential", "as_array"]
