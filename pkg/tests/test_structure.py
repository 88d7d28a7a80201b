"""
Unit tests for conformal structures, orbits and blow-ups
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from carnot_conformal.algebra.heintze import preserved_sequence
from carnot_conformal.conformal.similarity import GeneratedGroup, SimilarityElement
from carnot_conformal.conformal.structure import (
    blowup_demo,
    constant_field,
    deduplicate,
    fiber_pullback,
    first_layer_block,
    invariance_residual,
    invariant_structure,
    orbit_structure,
    pullback,
    pullback_field,
)
from carnot_conformal.exceptions import (
    FlagNotPreservedError,
    OrbitNotStableError,
    ValidationError,
)
from carnot_conformal.metric.homogeneous import ContactShear
from carnot_conformal.metric.symmetric_space import SpdPoint, distance

GOLDEN_SQUARE = (3 + math.sqrt(5)) / 2


@pytest.fixture
def identity_field():
    """Fixture providing the standard structure on R^2"""
    return constant_field(SpdPoint.identity(2))


@pytest.fixture
def conjugated_rotation(heisenberg_pair, quarter_turn) -> GeneratedGroup:
    """Fixture providing the quarter turn conjugated by diag(2, 1, 2)"""
    f = SimilarityElement(heisenberg_pair, linear=((2, 0, 0), (0, 1, 0), (0, 0, 2)))
    rotation = SimilarityElement(heisenberg_pair, linear=quarter_turn)
    return GeneratedGroup(heisenberg_pair, [rotation], f)


class TestPullback:
    """Test pullbacks through the first-layer differential"""

    def test_first_layer_block(self, heisenberg_pair, quarter_turn):
        """Test the block of the quarter turn"""
        assert np.allclose(first_layer_block(heisenberg_pair, quarter_turn), [[0, -1], [1, 0]])

    def test_rotation_fixes_standard_structure(self, heisenberg_pair, quarter_turn):
        """Test an isometry pulls I back to I"""
        g = SimilarityElement(heisenberg_pair, linear=quarter_turn)
        value = pullback(heisenberg_pair, g, SpdPoint.identity(2), (1, 2, 3))
        assert np.allclose(value.matrix, np.eye(2))

    def test_anisotropic_pullback(self, heisenberg_pair):
        """Test diag(2, 1/2, 1) pulls I back to diag(4, 1/4)"""
        half = Fraction(1, 2)
        g = SimilarityElement(heisenberg_pair, linear=((2, 0, 0), (0, half, 0), (0, 0, 1)))
        value = pullback(heisenberg_pair, g, SpdPoint.identity(2), (0, 0, 0))
        assert np.allclose(value.matrix, [[4, 0], [0, 0.25]])

    def test_pullback_field(self, heisenberg_pair, identity_field):
        """Test the shear pulls the standard structure back to a sheared one"""
        shear = ContactShear(heisenberg_pair, Fraction(1, 2))
        field = pullback_field(heisenberg_pair, shear, identity_field)
        # first-layer block [[1, 0], [1, 1]] at x = 1
        assert np.allclose(field((Fraction(1), 0, 0)).matrix, [[2, 1], [1, 1]])
        assert np.allclose(field((0, 0, 0)).matrix, np.eye(2))

    def test_deduplicate(self):
        """Test near-equal points collapse to one"""
        a = SpdPoint([[2, 0], [0, 0.5]])
        b = SpdPoint([[2 + 1e-13, 0], [0, 0.5]])
        assert len(deduplicate([a, b, SpdPoint.identity(2)])) == 2


class TestFiberPullback:
    """Test pullbacks on the quotients of the preserved flag"""

    def test_first_quotient(self, abelian_pair):
        """Test diag(2, 1, 1) acts on n_1 = span(e1, e2)"""
        flag = preserved_sequence(abelian_pair)
        g = SimilarityElement(abelian_pair, linear=((2, 0, 0), (0, 1, 0), (0, 0, 1)))
        value = fiber_pullback(abelian_pair, flag, 1, g, SpdPoint.identity(2))
        assert np.allclose(value.matrix, [[2, 0], [0, 0.5]])

    def test_second_quotient_is_trivial(self, abelian_pair):
        """Test the one-dimensional quotient carries the unique structure"""
        flag = preserved_sequence(abelian_pair)
        g = SimilarityElement(abelian_pair, linear=((2, 0, 0), (0, 1, 0), (0, 0, 3)))
        value = fiber_pullback(abelian_pair, flag, 2, g, SpdPoint.identity(1))
        assert np.allclose(value.matrix, [[1.0]])

    def test_flag_moving_map(self, heisenberg_123_pair):
        """Test a map moving span(e1) is refused"""
        flag = preserved_sequence(heisenberg_123_pair)
        swap = SimilarityElement(
            heisenberg_123_pair, linear=((0, 1, 0), (1, 0, 0), (0, 0, -1)), check=False
        )
        with pytest.raises(FlagNotPreservedError):
            fiber_pullback(heisenberg_123_pair, flag, 1, swap, SpdPoint.identity(1))


class TestInvariantStructure:
    """Test orbits and their circumcenters"""

    def test_rotation_orbit(self, heisenberg_pair, quarter_turn, identity_field):
        """Test the standard structure is already invariant under the quarter turn"""
        rotation = SimilarityElement(heisenberg_pair, linear=quarter_turn)
        group = GeneratedGroup(heisenberg_pair, [rotation])
        orbit = orbit_structure(group, identity_field, (0, 0, 0))
        assert len(orbit.points) == 1
        assert orbit.diameter == 0.0
        assert orbit.element_count == 4

    def test_conjugated_rotation(self, conjugated_rotation, identity_field):
        """Test the invariant structure is the push-forward diag(1/2, 2)"""
        orbit = orbit_structure(conjugated_rotation, identity_field, (0, 0, 0))
        assert len(orbit.points) == 2
        mu = invariant_structure(conjugated_rotation, identity_field, (0, 0, 0)).value
        assert np.allclose(mu.matrix, [[0.5, 0], [0, 2]])

    def test_invariance_residual(self, conjugated_rotation, identity_field):
        """Test d(g*mu(x), mu(x)) vanishes over the group"""
        residual = invariance_residual(conjugated_rotation, identity_field, (1, 0, 0))
        assert residual < 1e-8

    def test_unstable_orbit(self, heisenberg_pair, identity_field):
        """Test an anisotropic generator of infinite order is reported"""
        half = Fraction(1, 2)
        g = SimilarityElement(heisenberg_pair, linear=((2, 0, 0), (0, half, 0), (0, 0, 1)))
        group = GeneratedGroup(heisenberg_pair, [g])
        with pytest.raises(OrbitNotStableError):
            invariant_structure(group, identity_field, (0, 0, 0), word_cap=2)

    def test_orbit_is_deterministic(self, conjugated_rotation, identity_field):
        """Test repeated runs give the same orbit"""
        first = orbit_structure(conjugated_rotation, identity_field, (0, 0, 0))
        second = orbit_structure(conjugated_rotation, identity_field, (0, 0, 0))
        assert all(distance(p, q) == 0.0 for p, q in zip(first.points, second.points))


class TestBlowupDemo:
    """Test dilatations along blow-up sequences"""

    def test_shear_dilatation(self, heisenberg_pair):
        """Test the dilatation settles at K of the differential at p"""
        shear = ContactShear(heisenberg_pair, Fraction(1, 2))
        back = SimilarityElement.left_translation(heisenberg_pair, (-1, 0, 0))
        report = blowup_demo(heisenberg_pair, shear, [back] * 3, [1.0, 2.0, 3.0], [(0.0, 0.0, 0.0)])
        assert report.k_last == pytest.approx(GOLDEN_SQUARE)
        assert report.to_dict()["scales"] == [1.0, 2.0, 3.0]

    def test_length_mismatch(self, heisenberg_pair):
        """Test h and s sequences must pair up"""
        shear = ContactShear(heisenberg_pair, 1)
        with pytest.raises(ValidationError):
            blowup_demo(heisenberg_pair, shear, [], [1.0], [(0, 0, 0)])
