"""
Similarity elements x -> n * e^{tD}(A x)

Elements of N x| (R x Aut_g(N)) with an exact graded automorphism A. The
dilation e^{tD} is stored through its factor s = e^t, so that the rational
factors of a Carnot-type pair stay exact.
"""

import logging
import math
from fractions import Fraction
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple

from ..algebra.bch import bch_multiply, group_inverse
from ..algebra.heintze import DiagonalHeintzePair
from ..algebra.linalg import ZERO, Matrix, identity, inverse, mat_mul, mat_vec
from ..constants import Defaults
from ..exceptions import PairMismatchError, ValidationError
from ..metric.homogeneous import GroupMap, is_graded_automorphism
from ..utils import validate_positive_number, validate_square_matrix, validate_vector_length

logger = logging.getLogger(__name__)


def _power(s: Any, exponent: Fraction) -> Any:
    if isinstance(s, (int, Fraction)) and exponent.denominator == 1:
        return Fraction(s) ** int(exponent)
    return float(s) ** float(exponent)


class SimilarityElement(GroupMap):
    """
    The map x -> n * e^{tD}(A x) with s = e^t.

    Args:
        pair: Diagonal Heintze pair
        translation: n, defaults to the identity
        scale: s = e^t > 0, defaults to 1
        linear: A, defaults to the identity; must be a graded automorphism
        check: Verify that A is a graded automorphism

    Raises:
        ValidationError: If A is not a graded automorphism or s <= 0
    """

    def __init__(
        self,
        pair: DiagonalHeintzePair,
        translation: Optional[Sequence[Any]] = None,
        scale: Any = 1,
        linear: Optional[Sequence[Sequence[Any]]] = None,
        check: bool = True,
    ):
        super().__init__(pair)
        validate_positive_number(scale, "scale")
        self.translation = tuple(translation) if translation is not None else pair.algebra.zero()
        validate_vector_length(self.translation, pair.dim, "translation")
        self.scale = Fraction(scale) if isinstance(scale, int) else scale
        self.linear = (
            tuple(tuple(row) for row in linear) if linear is not None else identity(pair.dim)
        )
        validate_square_matrix(self.linear, pair.dim, "linear part")
        if check and not is_graded_automorphism(pair, self.linear):
            raise ValidationError("linear part is not a graded automorphism")

    @classmethod
    def identity(cls, pair: DiagonalHeintzePair) -> "SimilarityElement":
        return cls(pair, check=False)

    @classmethod
    def left_translation(cls, pair: DiagonalHeintzePair, n: Sequence[Any]) -> "SimilarityElement":
        return cls(pair, translation=n, check=False)

    @classmethod
    def dilation(cls, pair: DiagonalHeintzePair, s: Any) -> "SimilarityElement":
        """e^{tD} with e^t = s."""
        return cls(pair, scale=s, check=False)

    @property
    def t(self) -> float:
        return math.log(self.scale)

    def scaling_matrix(self, scale: Any = None) -> Matrix:
        """Matrix of e^{tD} = sum_j s^{lambda_j} P_j."""
        s = self.scale if scale is None else scale
        n = self.pair.dim
        out: List[List[Any]] = [[ZERO] * n for _ in range(n)]
        for p, ev in zip(self.pair.projectors, self.pair.eigenvalues):
            factor = _power(s, ev)
            for r in range(n):
                for c in range(n):
                    if p[r][c]:
                        out[r][c] = out[r][c] + factor * p[r][c]
        return tuple(tuple(row) for row in out)

    @property
    def linear_part(self) -> Matrix:
        """e^{tD} A."""
        return mat_mul(self.scaling_matrix(), self.linear)

    def __call__(self, x: Sequence[Any]) -> Tuple[Any, ...]:
        return bch_multiply(self.pair.algebra, self.translation, mat_vec(self.linear_part, x))

    def differential(self, x: Sequence[Any]) -> Matrix:
        return self.linear_part

    def inverse(self) -> "SimilarityElement":
        return invert(self)

    @property
    def key(self) -> Hashable:
        return (self.translation, self.scale, self.linear)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SimilarityElement) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"SimilarityElement(n={self.translation}, s={self.scale}, A={self.linear})"


def _same_pair(g: SimilarityElement, h: SimilarityElement) -> None:
    if g.pair is not h.pair and g.pair != h.pair:
        raise PairMismatchError("similarity elements belong to different pairs")


def compose(g: SimilarityElement, h: SimilarityElement) -> SimilarityElement:
    """
    g o h = (n1 * e^{t1 D} A1 n2, t1 + t2, A1 A2).

    Raises:
        PairMismatchError: If g and h act on different pairs
    """
    _same_pair(g, h)
    translation = bch_multiply(g.pair.algebra, g.translation, mat_vec(g.linear_part, h.translation))
    return SimilarityElement(
        g.pair, translation, g.scale * h.scale, mat_mul(g.linear, h.linear), check=False
    )


def invert(g: SimilarityElement) -> SimilarityElement:
    """g^{-1} = (A^{-1} e^{-tD}(n^{-1}), -t, A^{-1})."""
    a_inv = inverse(g.linear)
    back = g.scaling_matrix(1 / g.scale)
    translation = mat_vec(a_inv, mat_vec(back, group_inverse(g.translation)))
    return SimilarityElement(g.pair, translation, 1 / g.scale, a_inv, check=False)


def conjugate_by(f: SimilarityElement, g: SimilarityElement) -> SimilarityElement:
    """f o g o f^{-1}."""
    return compose(f, compose(g, invert(f)))


class GeneratedGroup:
    """
    The group generated by similarity elements, optionally conjugated by F.

    Elements are enumerated by word length over the generators and their
    inverses with exact deduplication.
    """

    def __init__(
        self,
        pair: DiagonalHeintzePair,
        generators: Sequence[SimilarityElement],
        conjugator: Optional[SimilarityElement] = None,
    ):
        self.pair = pair
        self.base_generators = tuple(generators)
        self.conjugator = conjugator
        if conjugator is not None:
            generators = [conjugate_by(conjugator, g) for g in generators]
        for g in generators:
            if g.pair != pair:
                raise PairMismatchError("generator acts on a different pair")
        self.generators = tuple(generators)
        self._cache: Dict[int, Tuple[SimilarityElement, ...]] = {}

    @property
    def letters(self) -> Tuple[SimilarityElement, ...]:
        return self.generators + tuple(invert(g) for g in self.generators)

    def elements(self, word_cap: int = Defaults.WORD_CAP) -> Tuple[SimilarityElement, ...]:
        """
        All products of at most word_cap letters, in breadth-first order.

        Args:
            word_cap: Largest word length

        Returns:
            Distinct elements, the identity first
        """
        validate_positive_number(word_cap, "word cap", allow_zero=True)
        if word_cap in self._cache:
            return self._cache[word_cap]
        unit = SimilarityElement.identity(self.pair)
        seen = {unit.key: unit}
        frontier = [unit]
        letters = self.letters
        for length in range(word_cap):
            grown = []
            for word in frontier:
                for letter in letters:
                    element = compose(word, letter)
                    if element.key not in seen:
                        seen[element.key] = element
                        grown.append(element)
            frontier = grown
            logger.debug("word length %d adds %d elements", length + 1, len(grown))
            if not frontier:
                break
        result = tuple(seen.values())
        self._cache[word_cap] = result
        return result

    def is_closed(self, word_cap: int = Defaults.WORD_CAP) -> bool:
        """True when words of length word_cap + 1 add nothing new."""
        return len(self.elements(word_cap)) == len(self.elements(word_cap + 1))


__all__ = [
    "SimilarityElement",
    "compose",
    "invert",
    "conjugate_by",
    "GeneratedGroup",
]
