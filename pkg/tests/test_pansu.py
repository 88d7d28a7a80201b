"""
Unit tests for blow-ups and numerical Pansu differentials
"""

from fractions import Fraction

import numpy as np
import pytest

from carnot_conformal.exceptions import NonConvergentError, NotCarnotTypeError, ValidationError
from carnot_conformal.metric.homogeneous import AffineMap, ContactShear, conjugate_map
from carnot_conformal.metric.pansu import as_array, blowup_linearization, pansu_differential

EXACT_SCALES = tuple(Fraction(1, 2**k) for k in range(3, 9))


@pytest.fixture
def shear(heisenberg_pair) -> ContactShear:
    """Fixture providing the shear with a = 1/2"""
    return ContactShear(heisenberg_pair, Fraction(1, 2))


@pytest.fixture
def base_point():
    """Fixture providing p = (1, 0, 0)"""
    return (Fraction(1), Fraction(0), Fraction(0))


class TestBlowupLinearization:
    """Test single-scale blow-ups"""

    def test_graded_affine_map_is_scale_free(self, heisenberg_pair, quarter_turn):
        """Test every blow-up of n * A equals A"""
        f = AffineMap(heisenberg_pair, quarter_turn, (1, 2, 3))
        p = (Fraction(2), Fraction(-1), Fraction(1))
        assert blowup_linearization(heisenberg_pair, f, p, Fraction(1, 3)) == quarter_turn

    def test_shear_first_layer_is_exact(self, heisenberg_pair, shear, base_point):
        """Test the first-layer block is already the differential at any scale"""
        linear = blowup_linearization(heisenberg_pair, shear, base_point, Fraction(1, 4))
        assert [row[:2] for row in linear[:2]] == [(1, 0), (1, 1)]


class TestPansuDifferential:
    """Test extrapolated blow-up limits"""

    def test_shear_exact_limit(self, heisenberg_pair, shear, base_point):
        """Test exact scales reproduce the closed-form differential"""
        result = pansu_differential(heisenberg_pair, shear, base_point, scales=EXACT_SCALES)
        assert result.limit == shear.differential(base_point)
        assert result.exact
        assert result.error == 0.0

    def test_shear_float_limit(self, heisenberg_pair, shear):
        """Test float scales agree with the closed form"""
        p = (0.5, 1.0, -2.0)
        result = pansu_differential(heisenberg_pair, shear, p, scales=(0.25, 0.125, 0.0625))
        expected = as_array(shear.differential(p))
        assert np.allclose(as_array(result.limit), expected, atol=1e-8)
        assert len(result.maps) == len(result.scales)

    def test_conjugated_shear(self, heisenberg_pair, shear, base_point):
        """Test conjugation by a graded dilation-like map matches the chain rule"""
        two, one = Fraction(2), Fraction(1)
        zero = Fraction(0)
        f = AffineMap(heisenberg_pair, ((two, zero, zero), (zero, one, zero), (zero, zero, two)))
        g = conjugate_map(f, shear)
        result = pansu_differential(heisenberg_pair, g, base_point, scales=EXACT_SCALES)
        assert result.limit == g.differential(base_point)

    def test_scales_must_decrease(self, heisenberg_pair, shear, base_point):
        """Test increasing scales are refused"""
        with pytest.raises(ValidationError):
            pansu_differential(heisenberg_pair, shear, base_point, scales=(0.1, 0.2))

    def test_non_carnot_pair(self, heisenberg_123_pair):
        """Test blow-ups need a Carnot grading"""
        f = AffineMap(heisenberg_123_pair, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
        with pytest.raises(NotCarnotTypeError):
            pansu_differential(heisenberg_123_pair, f, (0, 0, 0))

    def test_layer_mixing_diverges(self, heisenberg_pair, layer_mixing):
        """Test e1 -> e1 + e3 has blow-ups growing like 1/t"""
        f = AffineMap(heisenberg_pair, layer_mixing)
        with pytest.raises(NonConvergentError):
            pansu_differential(heisenberg_pair, f, (0, 0, 0), scales=EXACT_SCALES[:3])
