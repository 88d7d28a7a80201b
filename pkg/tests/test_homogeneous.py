"""
Unit tests for quasi-norms, dilations and graded automorphisms
"""

import math
from fractions import Fraction

import pytest

from carnot_conformal.algebra.bch import bch_multiply
from carnot_conformal.exceptions import (
    NonConvergentError,
    NotCarnotTypeError,
    SingularMatrixError,
    ValidationError,
)
from carnot_conformal.metric.homogeneous import (
    AffineMap,
    ContactShear,
    DInnerProduct,
    carnot_dilation,
    dilation,
    empirical_bilip_constant,
    homogeneity_check,
    homogeneous_dimension,
    is_automorphism,
    is_graded_automorphism,
    quasi_distance,
    quasi_norm,
    quasi_triangle_constant,
)


class TestDInnerProduct:
    """Test construction and checks of layer-adapted inner products"""

    def test_standard_is_identity_for_coordinate_layers(self, heisenberg_pair):
        """Test coordinate layers give the identity Gram matrix"""
        ip = DInnerProduct.standard(heisenberg_pair)
        assert ip.gram == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        assert ip.rational

    def test_from_gram_accepts_strings(self, heisenberg_pair):
        """Test "p/q" entries are parsed exactly"""
        ip = DInnerProduct.from_gram(heisenberg_pair, [["2", "1/2", 0], ["1/2", 1, 0], [0, 0, 3]])
        assert ip.gram[0][1] == Fraction(1, 2)
        assert ip.inner((1, 0, 0), (0, 1, 0)) == Fraction(1, 2)

    def test_from_gram_accepts_surds(self, heisenberg_pair):
        """Test Q(sqrt2, sqrt3) records are accepted"""
        ip = DInnerProduct.from_gram(
            heisenberg_pair, [[{"a": 2, "b": 1}, 0, 0], [0, 1, 0], [0, 0, 1]]
        )
        assert not ip.rational
        assert ip.array[0][0] == pytest.approx(2 + math.sqrt(2))

    def test_not_symmetric(self, heisenberg_pair):
        """Test asymmetric Gram matrices are refused"""
        with pytest.raises(ValidationError, match="symmetric"):
            DInnerProduct.from_gram(heisenberg_pair, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])

    def test_not_positive_definite(self, heisenberg_pair):
        """Test a negative diagonal entry is refused"""
        with pytest.raises(ValidationError, match="positive definite"):
            DInnerProduct.from_gram(heisenberg_pair, [[1, 0, 0], [0, 1, 0], [0, 0, -1]])

    def test_layers_not_orthogonal(self, heisenberg_pair):
        """Test pairing e1 with e3 is refused"""
        with pytest.raises(ValidationError, match="orthogonal"):
            DInnerProduct.from_gram(heisenberg_pair, [[1, 0, 1], [0, 1, 0], [1, 0, 2]])


class TestQuasiNorm:
    """Test the homogeneous quasi-norm and distance"""

    def test_quasi_norm_values(self, heisenberg_pair, standard_ip):
        """Test ||(2, 0, 4)|| = 2 + 4^(1/2)"""
        assert quasi_norm(heisenberg_pair, standard_ip, (2, 0, 4)) == pytest.approx(4.0)
        assert quasi_norm(heisenberg_pair, standard_ip, (0, 0, 1)) == pytest.approx(1.0)
        assert quasi_norm(heisenberg_pair, standard_ip, (0, 0, 0)) == 0.0

    def test_distance_is_left_invariant(self, heisenberg_pair, standard_ip):
        """Test rho(n x, n y) = rho(x, y) at one point"""
        x, y, n = (1.0, 2.0, -1.0), (0.5, -1.0, 3.0), (2.0, 1.0, 0.25)
        algebra = heisenberg_pair.algebra
        moved = quasi_distance(
            heisenberg_pair, standard_ip, bch_multiply(algebra, n, x), bch_multiply(algebra, n, y)
        )
        assert moved == pytest.approx(quasi_distance(heisenberg_pair, standard_ip, x, y))

    def test_distance_to_self(self, heisenberg_pair, standard_ip):
        """Test rho(x, x) = 0"""
        assert quasi_distance(heisenberg_pair, standard_ip, (1, 2, 3), (1, 2, 3)) == 0.0

    def test_euclidean_triangle_constant(self, euclidean_pair):
        """Test the identity derivation on R^2 gives a genuine norm"""
        ip = DInnerProduct.standard(euclidean_pair)
        assert quasi_triangle_constant(euclidean_pair, ip, samples=200) <= 1.0 + 1e-12

    def test_heisenberg_triangle_constant(self, heisenberg_pair, standard_ip):
        """Test the constant is finite and positive"""
        k = quasi_triangle_constant(heisenberg_pair, standard_ip, samples=200)
        assert 0.0 < k < 10.0


class TestDilations:
    """Test e^{tD} and the Carnot dilations"""

    def test_dilation(self, heisenberg_pair):
        """Test e^{(log 2) D} = diag(2, 2, 4)"""
        assert dilation(heisenberg_pair, math.log(2.0), (1, 1, 1)) == pytest.approx((2, 2, 4))

    def test_carnot_dilation_exact(self, heisenberg_pair):
        """Test delta_{1/2} is exact on rationals"""
        half = Fraction(1, 2)
        assert carnot_dilation(heisenberg_pair, half, (1, 1, 1)) == (half, half, Fraction(1, 4))

    def test_carnot_dilation_needs_positive_factor(self, heisenberg_pair):
        """Test t <= 0 is refused"""
        with pytest.raises(ValidationError):
            carnot_dilation(heisenberg_pair, 0, (1, 1, 1))

    def test_carnot_dilation_needs_carnot_pair(self, heisenberg_123_pair):
        """Test the non-Carnot pair has no grading"""
        with pytest.raises(NotCarnotTypeError):
            carnot_dilation(heisenberg_123_pair, 2, (1, 1, 1))

    def test_homogeneous_dimension(self, heisenberg_pair, hxh_pair, euclidean_pair):
        """Test Q = 4 for H, 8 for H x H, 2 for R^2"""
        assert homogeneous_dimension(heisenberg_pair) == 4
        assert homogeneous_dimension(hxh_pair) == 8
        assert homogeneous_dimension(euclidean_pair) == 2

    def test_homogeneous_dimension_non_carnot(self, abelian_pair):
        """Test Q is undefined off Carnot type"""
        with pytest.raises(NotCarnotTypeError):
            homogeneous_dimension(abelian_pair)


class TestHomogeneityCheck:
    """Test the sampled homogeneity and invariance identities"""

    def test_heisenberg(self, heisenberg_pair, standard_ip):
        """Test both residuals are at rounding level"""
        report = homogeneity_check(heisenberg_pair, standard_ip, samples=100)
        assert report.ok
        assert report.witness is None
        assert report.to_dict()["ok"] is True

    def test_non_carnot_pair(self, heisenberg_123_pair):
        """Test homogeneity holds without Carnot type"""
        ip = DInnerProduct.standard(heisenberg_123_pair)
        assert homogeneity_check(heisenberg_123_pair, ip, samples=100).ok

    def test_deterministic(self, heisenberg_pair, standard_ip):
        """Test the same seed gives the same residuals"""
        first = homogeneity_check(heisenberg_pair, standard_ip, samples=20, seed=7)
        second = homogeneity_check(heisenberg_pair, standard_ip, samples=20, seed=7)
        assert first == second

    def test_failure_has_witness(self, heisenberg_pair, standard_ip):
        """Test a zero tolerance reports a witness"""
        report = homogeneity_check(heisenberg_pair, standard_ip, samples=20, tolerance=0.0)
        if not report.ok:
            assert set(report.witness) == {"x", "y", "n", "t"}


class TestGradedAutomorphisms:
    """Test automorphism and layer checks"""

    def test_quarter_turn(self, heisenberg_pair, quarter_turn):
        """Test the first-layer rotation is graded"""
        assert is_graded_automorphism(heisenberg_pair, quarter_turn)

    def test_layer_mixing(self, heisenberg_pair, layer_mixing):
        """Test e1 -> e1 + e3 is an automorphism but not graded"""
        assert is_automorphism(heisenberg_pair, layer_mixing)
        assert not is_graded_automorphism(heisenberg_pair, layer_mixing)

    def test_not_an_automorphism(self, heisenberg_pair):
        """Test diag(1, 1, 2) breaks the bracket"""
        assert not is_graded_automorphism(heisenberg_pair, ((1, 0, 0), (0, 1, 0), (0, 0, 2)))

    def test_singular(self, heisenberg_pair):
        """Test a singular map is refused"""
        with pytest.raises(SingularMatrixError):
            is_graded_automorphism(heisenberg_pair, ((1, 0, 0), (0, 0, 0), (0, 0, 1)))


class TestGroupMaps:
    """Test affine maps, shears and composition"""

    def test_affine_inverse(self, heisenberg_pair, quarter_turn):
        """Test the inverse undoes the map exactly"""
        f = AffineMap(heisenberg_pair, quarter_turn, (Fraction(1), Fraction(2), Fraction(3)))
        x = (Fraction(1, 2), Fraction(-1), Fraction(5))
        assert f.inverse()(f(x)) == x

    def test_affine_differential(self, heisenberg_pair, quarter_turn, layer_mixing):
        """Test graded linear parts are their own differential"""
        assert AffineMap(heisenberg_pair, quarter_turn).differential((0, 0, 0)) == quarter_turn
        with pytest.raises(NonConvergentError):
            AffineMap(heisenberg_pair, layer_mixing).differential((0, 0, 0))

    def test_shear_inverse(self, heisenberg_pair):
        """Test the shear with -a undoes the shear with a"""
        shear = ContactShear(heisenberg_pair, Fraction(1, 2))
        p = (Fraction(3), Fraction(1), Fraction(-2))
        assert shear.inverse()(shear(p)) == p

    def test_shear_needs_heisenberg(self, euclidean_pair):
        """Test the shear is only defined on the first Heisenberg group"""
        with pytest.raises(ValidationError):
            ContactShear(euclidean_pair, 1)

    def test_composed_differential(self, heisenberg_pair, quarter_turn):
        """Test the chain rule on rotation after shear"""
        shear = ContactShear(heisenberg_pair, Fraction(1, 2))
        rotation = AffineMap(heisenberg_pair, quarter_turn)
        composed = shear.then(rotation)
        p = (Fraction(1), Fraction(0), Fraction(0))
        x = (Fraction(2), Fraction(1), Fraction(1))
        assert composed(x) == rotation(shear(x))
        expected = ((-1, -1, 0), (1, 0, 0), (0, 0, 1))
        assert composed.differential(p) == expected

    def test_isometry_bilip_constant(self, heisenberg_pair, standard_ip, quarter_turn):
        """Test a graded isometry has distortion one at every scale"""
        f = AffineMap(heisenberg_pair, quarter_turn, (1, 2, 3))
        lower, upper = empirical_bilip_constant(
            heisenberg_pair, standard_ip, f, samples=30, exponents=range(-3, 4)
        )
        assert lower == pytest.approx(1.0, rel=1e-9)
        assert upper == pytest.approx(1.0, rel=1e-9)
