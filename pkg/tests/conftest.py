"""
Pytest configuration and shared fixtures
"""

from fractions import Fraction
from typing import Dict

import numpy as np
import pytest

from carnot_conformal import (
    DiagonalHeintzePair,
    DInnerProduct,
    LieAlgebra,
    diagonal_pair,
    direct_product,
    example_inner_products,
    example_pair,
)

# ============================================================================
# ALGEBRA FIXTURES
# ============================================================================


@pytest.fixture
def heisenberg() -> LieAlgebra:
    """Fixture providing the first Heisenberg algebra [e1, e2] = e3"""
    return LieAlgebra.heisenberg()


@pytest.fixture
def abelian3() -> LieAlgebra:
    """Fixture providing the abelian algebra R^3"""
    return LieAlgebra.abelian(3)


@pytest.fixture
def hxh_algebra() -> LieAlgebra:
    """Fixture providing H x H with basis (e1, e2, e3, e1~, e2~, e3~)"""
    return direct_product(LieAlgebra.heisenberg(), LieAlgebra.heisenberg())


@pytest.fixture
def rng() -> np.random.Generator:
    """Fixture providing a seeded generator"""
    return np.random.default_rng(42)


# ============================================================================
# PAIR FIXTURES
# ============================================================================


@pytest.fixture
def heisenberg_pair(heisenberg) -> DiagonalHeintzePair:
    """Fixture providing the Carnot pair (H, diag(1, 1, 2))"""
    return diagonal_pair(heisenberg, (1, 1, 2))


@pytest.fixture
def heisenberg_123_pair(heisenberg) -> DiagonalHeintzePair:
    """Fixture providing the non-Carnot pair (H, diag(1, 2, 3))"""
    return diagonal_pair(heisenberg, (1, 2, 3))


@pytest.fixture
def abelian_pair(abelian3) -> DiagonalHeintzePair:
    """Fixture providing (R^3, diag(1, 1, 2))"""
    return diagonal_pair(abelian3, (1, 1, 2))


@pytest.fixture
def euclidean_pair() -> DiagonalHeintzePair:
    """Fixture providing (R^2, identity)"""
    return diagonal_pair(LieAlgebra.abelian(2), (1, 1))


@pytest.fixture
def hxh_pair() -> DiagonalHeintzePair:
    """Fixture providing the bundled H x H pair"""
    return example_pair("hxh")


# ============================================================================
# INNER PRODUCT FIXTURES
# ============================================================================


@pytest.fixture
def standard_ip(heisenberg_pair) -> DInnerProduct:
    """Fixture providing the standard inner product on the Heisenberg pair"""
    return DInnerProduct.standard(heisenberg_pair)


@pytest.fixture
def hxh_inner_products() -> Dict[str, DInnerProduct]:
    """Fixture providing the inner products d1 and d2 on H x H"""
    return example_inner_products("hxh")


# ============================================================================
# MATRIX FIXTURES
# ============================================================================


@pytest.fixture
def quarter_turn():
    """Fixture providing the quarter turn of the Heisenberg first layer"""
    one, zero = Fraction(1), Fraction(0)
    return ((zero, -one, zero), (one, zero, zero), (zero, zero, one))


@pytest.fixture
def layer_mixing():
    """Fixture providing the automorphism e1 -> e1 + e3 that mixes layers"""
    one, zero = Fraction(1), Fraction(0)
    return ((one, zero, zero), (zero, one, zero), (one, zero, one))
