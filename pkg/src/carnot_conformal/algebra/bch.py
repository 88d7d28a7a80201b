"""
Baker-Campbell-Hausdorff group law in exponential coordinates

For a nilpotent algebra of class c the Dynkin series terminates at bracket
depth c, so x * y = log(exp x exp y) is a finite sum of right-nested brackets
of x and y with rational coefficients.
"""

import logging
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Any, Dict, Iterator, List, Sequence, Tuple

from .lie_core import LieAlgebra, _check

logger = logging.getLogger(__name__)

Word = str
DynkinTable = Tuple[Tuple[Word, Fraction], ...]


def _blocks(budget: int) -> Iterator[Tuple[Tuple[int, int], ...]]:
    """Sequences of (r_i, s_i) with r_i + s_i >= 1 and total size <= budget."""
    if budget <= 0:
        yield ()
        return
    yield ()
    for size in range(1, budget + 1):
        for r in range(size + 1):
            for rest in _blocks(budget - size):
                yield ((r, size - r),) + rest


@lru_cache(maxsize=None)
def dynkin_terms(depth: int) -> DynkinTable:
    """
    Dynkin coefficients of the BCH series up to total degree depth.

    Args:
        depth: Largest bracket depth kept (the nilpotency class)

    Returns:
        (word, coefficient) pairs over the letters X and Y; a word stands for
        the right-nested bracket [w_1, [w_2, ..., [w_{m-1}, w_m]]]
    """
    terms: Dict[Word, Fraction] = defaultdict(Fraction)
    for blocks in _blocks(depth):
        if not blocks:
            continue
        k = len(blocks)
        m = sum(r + s for r, s in blocks)
        word = "".join("X" * r + "Y" * s for r, s in blocks)
        if m >= 2 and word[-1] == word[-2]:
            continue
        denominator = m
        for r, s in blocks:
            denominator *= factorial(r) * factorial(s)
        terms[word] += Fraction((-1) ** (k - 1), k * denominator)
    ordered = sorted(terms.items(), key=lambda item: (len(item[0]), item[0]))
    table = tuple((word, c) for word, c in ordered if c)
    logger.debug("Dynkin table for depth %d has %d words", depth, len(table))
    return table


def _nested(
    algebra: LieAlgebra, word: Word, letters: Dict[str, Any], cache: Dict[Word, Any]
) -> Any:
    if word in cache:
        return cache[word]
    if len(word) == 1:
        value = letters[word]
    else:
        value = algebra.bracket(letters[word[0]], _nested(algebra, word[1:], letters, cache))
    cache[word] = value
    return value


def bch_multiply(algebra: LieAlgebra, x: Sequence[Any], y: Sequence[Any]) -> Tuple[Any, ...]:
    """
    Group product x * y in exponential coordinates of the first kind.

    Exact on Fraction inputs; floats and sympy expressions go through the
    same finite series.

    Args:
        algebra: A nilpotent Lie algebra
        x: Left factor
        y: Right factor

    Returns:
        log(exp(x) exp(y))

    Raises:
        NotNilpotentError: If the algebra is not nilpotent
        DimensionMismatchError: If x or y has the wrong length

    Examples:
        >>> h = LieAlgebra.heisenberg()
        >>> bch_multiply(h, (1, 0, 0), (0, 1, 0))[2]
        Fraction(1, 2)
    """
    _check(algebra, x, y)
    depth = algebra.nilpotency_class
    if depth <= 1:
        return tuple(a + b for a, b in zip(x, y))
    letters = {"X": tuple(x), "Y": tuple(y)}
    cache: Dict[Word, Any] = {}
    out: List[Any] = [a + b for a, b in zip(x, y)]
    for word, c in dynkin_terms(depth):
        if len(word) == 1:
            continue
        term = _nested(algebra, word, letters, cache)
        out = [a + c * b if b else a for a, b in zip(out, term)]
    return tuple(out)


def group_inverse(x: Sequence[Any]) -> Tuple[Any, ...]:
    """x^{-1} = -x in exponential coordinates."""
    return tuple(-a for a in x)


def conjugate(algebra: LieAlgebra, g: Sequence[Any], x: Sequence[Any]) -> Tuple[Any, ...]:
    """g * x * g^{-1}."""
    return bch_multiply(algebra, bch_multiply(algebra, g, x), group_inverse(g))


__all__ = ["dynkin_terms", "bch_multiply", "group_inverse", "conjugate"]
