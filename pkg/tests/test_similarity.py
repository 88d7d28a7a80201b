"""
Unit tests for similarity elements and generated groups
"""

from fractions import Fraction

import pytest

from carnot_conformal.conformal.similarity import (
    GeneratedGroup,
    SimilarityElement,
    compose,
    conjugate_by,
    invert,
)
from carnot_conformal.exceptions import PairMismatchError, ValidationError
from carnot_conformal.io.examples import load_example, resolve_pair
from carnot_conformal.io.serialization import parse_group


@pytest.fixture
def rotation(heisenberg_pair, quarter_turn) -> SimilarityElement:
    """Fixture providing the quarter turn as a similarity"""
    return SimilarityElement(heisenberg_pair, linear=quarter_turn)


@pytest.fixture
def mixed(heisenberg_pair, quarter_turn) -> SimilarityElement:
    """Fixture providing n * e^{(log 2) D} A with a rational translation"""
    n = (Fraction(1), Fraction(2), Fraction(3))
    return SimilarityElement(heisenberg_pair, n, 2, quarter_turn)


class TestSimilarityElement:
    """Test evaluation and validation"""

    def test_evaluation(self, heisenberg_pair, mixed):
        """Test x -> n * e^{tD}(A x) at e1"""
        # A e1 = e2, e^{tD} e2 = 2 e2, (1, 2, 3) * (0, 2, 0) = (1, 4, 3 + 1)
        assert mixed((1, 0, 0)) == (1, 4, 4)

    def test_scaling_matrix_exact(self, heisenberg_pair):
        """Test s = 2 gives diag(2, 2, 4) exactly"""
        g = SimilarityElement.dilation(heisenberg_pair, 2)
        assert g.scaling_matrix() == ((2, 0, 0), (0, 2, 0), (0, 0, 4))
        assert isinstance(g.scaling_matrix()[2][2], Fraction)

    def test_non_graded_linear_part(self, heisenberg_pair, layer_mixing):
        """Test a layer-mixing automorphism is refused"""
        with pytest.raises(ValidationError):
            SimilarityElement(heisenberg_pair, linear=layer_mixing)

    def test_non_positive_scale(self, heisenberg_pair):
        """Test s <= 0 is refused"""
        with pytest.raises(ValidationError):
            SimilarityElement(heisenberg_pair, scale=0)

    def test_differential(self, mixed):
        """Test the differential is e^{tD} A everywhere"""
        assert mixed.differential((5, 5, 5)) == ((0, -2, 0), (2, 0, 0), (0, 0, 4))


class TestGroupLaw:
    """Test composition, inversion and conjugation"""

    def test_compose_matches_evaluation(self, mixed, rotation):
        """Test (g o h)(x) = g(h(x))"""
        x = (Fraction(1, 2), Fraction(-3), Fraction(2))
        assert compose(mixed, rotation)(x) == mixed(rotation(x))
        assert compose(rotation, mixed)(x) == rotation(mixed(x))

    def test_inverse(self, heisenberg_pair, mixed):
        """Test g o g^{-1} is the identity"""
        assert compose(mixed, invert(mixed)) == SimilarityElement.identity(heisenberg_pair)
        assert compose(invert(mixed), mixed) == SimilarityElement.identity(heisenberg_pair)

    def test_inverse_evaluation(self, mixed):
        """Test g^{-1}(g(x)) = x"""
        x = (Fraction(2), Fraction(1), Fraction(-1))
        assert mixed.inverse()(mixed(x)) == x

    def test_conjugate(self, heisenberg_pair, rotation):
        """Test diag(2, 1, 2) conjugates the quarter turn to an anisotropic map"""
        f = SimilarityElement(heisenberg_pair, linear=((2, 0, 0), (0, 1, 0), (0, 0, 2)))
        conjugated = conjugate_by(f, rotation)
        assert conjugated.linear == ((0, -2, 0), (Fraction(1, 2), 0, 0), (0, 0, 1))

    def test_pair_mismatch(self, rotation, abelian_pair):
        """Test elements on different pairs do not compose"""
        other = SimilarityElement.identity(abelian_pair)
        with pytest.raises(PairMismatchError):
            compose(rotation, other)


class TestGeneratedGroup:
    """Test enumeration of generated groups"""

    def test_rotation_group(self, rotation, heisenberg_pair):
        """Test the quarter turn generates a cyclic group of order 4"""
        group = GeneratedGroup(heisenberg_pair, [rotation])
        assert len(group.elements()) == 4
        assert group.is_closed()
        assert group.elements()[0] == SimilarityElement.identity(heisenberg_pair)

    def test_infinite_group(self, heisenberg_pair):
        """Test a dilation generator adds two elements per word length"""
        group = GeneratedGroup(heisenberg_pair, [SimilarityElement.dilation(heisenberg_pair, 2)])
        assert len(group.elements(2)) == 5
        assert not group.is_closed(2)

    def test_word_cap_zero(self, rotation, heisenberg_pair):
        """Test cap zero yields only the identity"""
        assert len(GeneratedGroup(heisenberg_pair, [rotation]).elements(0)) == 1

    def test_conjugated_example(self):
        """Test the bundled conjugated group is still of order 4"""
        doc = load_example("group-rotation-conjugated")
        group = parse_group(resolve_pair(doc), doc)
        assert group.conjugator is not None
        assert len(group.elements()) == 4

    def test_generator_on_other_pair(self, heisenberg_pair, abelian_pair):
        """Test generators must act on the group's pair"""
        with pytest.raises(PairMismatchError):
            GeneratedGroup(heisenberg_pair, [SimilarityElement.identity(abelian_pair)])
