"""
Finite matrix groups given by their elements

Builds the multiplication table of an exact matrix group and identifies its
isomorphism type by order statistics and, for order 16, by a semidirect
product presentation.
"""

import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import sympy

from ..algebra.linalg import ZERO, Matrix
from ..exceptions import EmptyInputError, ValidationError
from ..utils import format_exact

logger = logging.getLogger(__name__)

Table = Tuple[Tuple[int, ...], ...]

SEMIDIRECT_NAME = "(Z2^3):Z2"


def tidy(value: Any) -> Any:
    """Expand a sympy value and fold rationals back to Fraction."""
    if isinstance(value, sympy.Expr):
        value = sympy.expand(value)
        if value.is_Rational:
            return Fraction(int(value.p), int(value.q))
    return value


def exact_matmul(a: Sequence[Sequence[Any]], b: Sequence[Sequence[Any]]) -> Matrix:
    n = len(b)
    return tuple(
        tuple(tidy(sum((row[k] * b[k][c] for k in range(n)), ZERO)) for c in range(len(b[0])))
        for row in a
    )


def matrix_key(a: Sequence[Sequence[Any]]) -> Tuple[str, ...]:
    return tuple(format_exact(x) for row in a for x in row)


def multiplication_table(elements: Sequence[Matrix]) -> Table:
    """
    table[i][j] = index of elements[i] @ elements[j].

    Raises:
        EmptyInputError: If there are no elements
        ValidationError: If the set is not closed under multiplication
    """
    if not elements:
        raise EmptyInputError("group has no elements")
    index = {matrix_key(a): i for i, a in enumerate(elements)}
    rows = []
    for a in elements:
        row = []
        for b in elements:
            key = matrix_key(exact_matmul(a, b))
            if key not in index:
                raise ValidationError("element set is not closed under multiplication")
            row.append(index[key])
        rows.append(tuple(row))
    return tuple(rows)


def _identity_index(table: Table) -> int:
    for e in range(len(table)):
        if all(table[e][j] == j for j in range(len(table))):
            return e
    raise ValidationError("element set has no identity")


def element_orders(table: Table) -> List[int]:
    e = _identity_index(table)
    orders = []
    for g in range(len(table)):
        power, k = g, 1
        while power != e:
            power = table[power][g]
            k += 1
        orders.append(k)
    return orders


@dataclass(frozen=True)
class GroupIdentification:
    """Order statistics of a finite group and the name they determine."""

    order: int
    abelian: bool
    order_histogram: Dict[int, int]
    center_order: int
    name: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            "order": self.order,
            "abelian": self.abelian,
            "order_histogram": {str(k): v for k, v in sorted(self.order_histogram.items())},
            "center_order": self.center_order,
            "group": self.name,
        }


def _conjugate(table: Table, inverses: Sequence[int], g: int, x: int) -> int:
    return table[table[g][x]][inverses[g]]


def _subgroup(table: Table, generators: Sequence[int], identity: int) -> frozenset:
    members = {identity}
    frontier = [identity]
    while frontier:
        grown = []
        for x in frontier:
            for g in generators:
                y = table[x][g]
                if y not in members:
                    members.add(y)
                    grown.append(y)
        frontier = grown
    return frozenset(members)


def find_semidirect_presentation(table: Table) -> Optional[Tuple[frozenset, int]]:
    """
    Find N = Z2^3 normal of index 2 and an involution s outside N whose
    conjugation action on N fixes exactly 4 elements.

    Such an action swaps two generators of N and fixes a third, so the group
    is (Z2^3) x| Z2 with the swap action.
    """
    if len(table) != 16:
        return None
    e = _identity_index(table)
    orders = element_orders(table)
    inverses = [next(j for j in range(16) if table[g][j] == e) for g in range(16)]
    involutions = [g for g in range(16) if orders[g] == 2]
    for triple in itertools.combinations(involutions, 3):
        if any(table[a][b] != table[b][a] for a, b in itertools.combinations(triple, 2)):
            continue
        n = _subgroup(table, triple, e)
        if len(n) != 8:
            continue
        if any(_conjugate(table, inverses, g, x) not in n for g in range(16) for x in n):
            continue
        for s in involutions:
            if s in n:
                continue
            fixed = sum(1 for x in n if _conjugate(table, inverses, s, x) == x)
            if fixed == 4:
                return n, s
    return None


def identify_group(elements: Sequence[Matrix]) -> GroupIdentification:
    """
    Identify a finite matrix group.

    Recognized names are "trivial", "Z2^k" for elementary abelian 2-groups and
    "(Z2^3):Z2"; anything else is reported as "order <n>".

    Raises:
        ValidationError: If the elements do not form a group
    """
    table = multiplication_table(elements)
    order = len(table)
    abelian = all(table[i][j] == table[j][i] for i in range(order) for j in range(i))
    orders = element_orders(table)
    histogram = dict(Counter(orders))
    center = sum(1 for i in range(order) if all(table[i][j] == table[j][i] for j in range(order)))
    if order == 1:
        name = "trivial"
    elif abelian and set(orders) <= {1, 2}:
        k = order.bit_length() - 1
        name = "Z2" if k == 1 else f"Z2^{k}"
    elif find_semidirect_presentation(table) is not None:
        name = SEMIDIRECT_NAME
    else:
        name = f"order {order}"
    logger.debug("identified group of order %d as %s", order, name)
    return GroupIdentification(order, abelian, histogram, center, name)


__all__ = [
    "Table",
    "tidy",
    "SEMIDIRECT_NAME",
    "exact_matmul",
    "matrix_key",
    "multiplication_table",
    "element_orders",
    "GroupIdentification",
    "find_semidirect_presentation",
    "identify_group",
]
