"""
Unit tests for finite matrix group identification
"""

import itertools
from fractions import Fraction

import pytest
import sympy

from carnot_conformal.automorphisms.finite_groups import (
    SEMIDIRECT_NAME,
    element_orders,
    exact_matmul,
    identify_group,
    matrix_key,
    multiplication_table,
    tidy,
)
from carnot_conformal.exceptions import EmptyInputError, ValidationError

ONE, ZERO = Fraction(1), Fraction(0)


def _diag(*values):
    n = len(values)
    return tuple(tuple(Fraction(values[i]) if i == j else ZERO for j in range(n)) for i in range(n))


def _sign_matrices(n):
    return [_diag(*signs) for signs in itertools.product((1, -1), repeat=n)]


def _dihedral_square():
    rotation = ((ZERO, -ONE), (ONE, ZERO))
    reflection = _diag(1, -1)
    powers = [_diag(1, 1)]
    for _ in range(3):
        powers.append(exact_matmul(rotation, powers[-1]))
    return powers + [exact_matmul(p, reflection) for p in powers]


class TestExactHelpers:
    """Test tidy, products and keys"""

    def test_tidy_folds_rationals(self):
        """Test rational sympy values become Fractions"""
        assert tidy(sympy.Rational(1, 2)) == Fraction(1, 2)
        assert isinstance(tidy(sympy.sqrt(2) * sympy.sqrt(2)), Fraction)
        assert tidy(sympy.sqrt(2)) == sympy.sqrt(2)

    def test_matmul_with_surds(self):
        """Test sqrt(2) * sqrt(2) collapses to 2"""
        r = sympy.sqrt(2)
        assert exact_matmul(((r,),), ((r,),)) == ((Fraction(2),),)

    def test_matrix_key(self):
        """Test keys do not depend on the numeric type"""
        assert matrix_key(((1, 0), (0, 1))) == matrix_key(_diag(1, 1))


class TestMultiplicationTable:
    """Test tables and element orders"""

    def test_sign_group(self):
        """Test {I, -I} has orders 1 and 2"""
        table = multiplication_table([_diag(1, 1), _diag(-1, -1)])
        assert table == ((0, 1), (1, 0))
        assert element_orders(table) == [1, 2]

    def test_empty(self):
        """Test an empty element list is refused"""
        with pytest.raises(EmptyInputError):
            multiplication_table([])

    def test_not_closed(self):
        """Test a set missing a product is refused"""
        with pytest.raises(ValidationError, match="closed"):
            multiplication_table([_diag(1, 1), _diag(1, -1), _diag(-1, 1)])


class TestIdentifyGroup:
    """Test group identification"""

    def test_trivial(self):
        """Test the one-element group"""
        assert identify_group([_diag(1, 1)]).name == "trivial"

    def test_elementary_abelian(self):
        """Test sign matrices of size 3 form Z2^3"""
        ident = identify_group(_sign_matrices(3))
        assert ident.name == "Z2^3"
        assert ident.abelian
        assert ident.order_histogram == {1: 1, 2: 7}

    def test_dihedral(self):
        """Test the symmetries of the square are reported by order"""
        ident = identify_group(_dihedral_square())
        assert ident.name == "order 8"
        assert not ident.abelian
        assert ident.center_order == 2
        assert ident.order_histogram == {1: 1, 2: 5, 4: 2}

    def test_semidirect(self):
        """Test sign matrices extended by a coordinate swap"""
        signs = _sign_matrices(3)
        swap = ((ZERO, ONE, ZERO), (ONE, ZERO, ZERO), (ZERO, ZERO, ONE))
        elements = signs + [exact_matmul(swap, s) for s in signs]
        ident = identify_group(elements)
        assert ident.order == 16
        assert ident.name == SEMIDIRECT_NAME
        assert ident.to_dict()["group"] == SEMIDIRECT_NAME
