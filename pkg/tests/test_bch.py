"""
Unit tests for the BCH group law
"""

import random
from fractions import Fraction

import pytest

from carnot_conformal.algebra.bch import bch_multiply, conjugate, dynkin_terms, group_inverse
from carnot_conformal.algebra.lie_core import LieAlgebra
from carnot_conformal.exceptions import DimensionMismatchError


def _filiform() -> LieAlgebra:
    """[e1, e2] = e3, [e1, e3] = e4, class 3."""
    return LieAlgebra.from_brackets(("e1", "e2", "e3", "e4"), {(0, 1): {2: 1}, (0, 2): {3: 1}})


def _random_vector(gen: random.Random, n: int):
    return tuple(Fraction(gen.randint(-9, 9), gen.randint(1, 5)) for _ in range(n))


def _heisenberg_oracle(x, y):
    """Product of upper unitriangular matrices, read back in exponential coordinates."""
    return (x[0] + y[0], x[1] + y[1], x[2] + y[2] + (x[0] * y[1] - x[1] * y[0]) / 2)


class TestDynkinTable:
    """Test the BCH coefficients"""

    def test_degree_two(self):
        """Test [X, Y] enters with total coefficient 1/2"""
        table = dict(dynkin_terms(2))
        assert table.get("XY", 0) - table.get("YX", 0) == Fraction(1, 2)
        assert table["X"] == 1
        assert table["Y"] == 1


class TestBchMultiply:
    """Test exact products"""

    def test_abelian_is_addition(self, abelian3):
        """Test x * y = x + y without brackets"""
        assert bch_multiply(abelian3, (1, 2, 3), (4, 5, 6)) == (5, 7, 9)

    def test_heisenberg_generators(self, heisenberg):
        """Test e1 * e2 = e1 + e2 + e3 / 2"""
        assert bch_multiply(heisenberg, (1, 0, 0), (0, 1, 0)) == (1, 1, Fraction(1, 2))

    def test_heisenberg_matches_matrix_oracle(self, heisenberg):
        """Test agreement with the unitriangular matrix product on 1000 random pairs"""
        gen = random.Random(7)
        for _ in range(1000):
            x, y = _random_vector(gen, 3), _random_vector(gen, 3)
            assert bch_multiply(heisenberg, x, y) == _heisenberg_oracle(x, y)

    @pytest.mark.slow
    def test_associative_class_three(self):
        """Test associativity on a class-3 algebra over 100 random triples"""
        algebra = _filiform()
        gen = random.Random(11)
        for _ in range(100):
            x, y, z = (_random_vector(gen, 4) for _ in range(3))
            left = bch_multiply(algebra, bch_multiply(algebra, x, y), z)
            right = bch_multiply(algebra, x, bch_multiply(algebra, y, z))
            assert left == right

    def test_class_three_degree_three_terms(self):
        """Test e1 * e2 picks up [e1, [e1, e2]] / 12"""
        product = bch_multiply(_filiform(), (1, 0, 0, 0), (0, 1, 0, 0))
        assert product == (1, 1, Fraction(1, 2), Fraction(1, 12))

    def test_inverse(self, heisenberg):
        """Test x * x^{-1} = 0"""
        x = (Fraction(3), Fraction(-2), Fraction(1, 7))
        assert bch_multiply(heisenberg, x, group_inverse(x)) == (0, 0, 0)

    def test_conjugation_fixes_center(self, heisenberg):
        """Test g z g^{-1} = z for central z"""
        z = (0, 0, Fraction(4))
        assert conjugate(heisenberg, (Fraction(1), Fraction(2), Fraction(3)), z) == z

    def test_float_inputs(self, heisenberg):
        """Test floats go through the same series"""
        product = bch_multiply(heisenberg, (1.0, 0.0, 0.0), (0.0, 2.0, 0.0))
        assert product == pytest.approx((1.0, 2.0, 1.0))

    def test_dimension_checked(self, heisenberg):
        """Test wrong-length factors"""
        with pytest.raises(DimensionMismatchError):
            bch_multiply(heisenberg, (1, 0), (0, 1, 0))
