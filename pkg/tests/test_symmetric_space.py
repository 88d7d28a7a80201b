"""
Unit tests for SL(m)/SO(m): points, the GL(m) action, distances and circumcenters
"""

import math

import numpy as np
import pytest
from scipy.stats import ortho_group

from carnot_conformal.exceptions import EmptyInputError, SingularMatrixError, ValidationError
from carnot_conformal.io.examples import load_example
from carnot_conformal.io.serialization import parse_points
from carnot_conformal.metric.symmetric_space import (
    SpdPoint,
    act,
    bound_check,
    circumcenter,
    dilatation,
    distance,
    exp_map,
    geodesic,
    log_map,
    min_enclosing_ball,
)

LN2 = math.log(2.0)


def _random_spd(rng: np.random.Generator, m: int) -> SpdPoint:
    b = rng.standard_normal((m, m))
    return SpdPoint(b @ b.T + m * np.eye(m))


class TestSpdPoint:
    """Test point normalization and validation"""

    def test_rescaled_to_determinant_one(self):
        """Test diag(4, 1) becomes diag(2, 1/2)"""
        s = SpdPoint([[4, 0], [0, 1]])
        assert np.allclose(s.matrix, [[2, 0], [0, 0.5]])
        assert np.linalg.det(s.matrix) == pytest.approx(1.0)

    def test_not_symmetric(self):
        """Test asymmetric input is refused"""
        with pytest.raises(ValidationError, match="symmetric"):
            SpdPoint([[1, 1], [0, 1]])

    def test_not_positive_definite(self):
        """Test indefinite input is refused"""
        with pytest.raises(ValidationError, match="positive definite"):
            SpdPoint([[1, 0], [0, -1]])

    def test_not_square(self):
        """Test non-square input is refused"""
        with pytest.raises(ValidationError):
            SpdPoint([[1, 0, 0], [0, 1, 0]])


class TestGeometry:
    """Test the action, distance, geodesics and exponential map"""

    def test_distance_to_identity(self):
        """Test d(I, diag(2, 1/2)) = sqrt(2) log 2"""
        d = distance(SpdPoint.identity(2), SpdPoint([[2, 0], [0, 0.5]]))
        assert d == pytest.approx(math.sqrt(2.0) * LN2)

    def test_distance_symmetric(self, rng):
        """Test d(S1, S2) = d(S2, S1)"""
        s1, s2 = _random_spd(rng, 3), _random_spd(rng, 3)
        assert distance(s1, s2) == pytest.approx(distance(s2, s1))

    def test_action_scales_out_determinant(self):
        """Test diag(2, 1)[I] = diag(2, 1/2)"""
        image = act([[2, 0], [0, 1]], SpdPoint.identity(2))
        assert np.allclose(image.matrix, [[2, 0], [0, 0.5]])

    def test_orthogonal_maps_fix_identity(self):
        """Test SO(m) is the stabilizer of I"""
        q = ortho_group.rvs(3, random_state=0)
        assert np.allclose(act(q, SpdPoint.identity(3)).matrix, np.eye(3))

    def test_action_is_isometric(self, rng):
        """Test d(M[S1], M[S2]) = d(S1, S2)"""
        s1, s2 = _random_spd(rng, 3), _random_spd(rng, 3)
        m = rng.standard_normal((3, 3))
        assert distance(act(m, s1), act(m, s2)) == pytest.approx(distance(s1, s2))

    def test_singular_action(self):
        """Test a singular matrix does not act"""
        with pytest.raises(SingularMatrixError):
            act([[1, 0], [0, 0]], SpdPoint.identity(2))

    def test_geodesic_midpoint(self, rng):
        """Test the midpoint halves the distance"""
        s1, s2 = _random_spd(rng, 3), _random_spd(rng, 3)
        mid = geodesic(s1, s2, 0.5)
        assert distance(s1, mid) == pytest.approx(distance(s1, s2) / 2)
        assert distance(mid, s2) == pytest.approx(distance(s1, s2) / 2)
        assert geodesic(s1, s2, 0) is s1

    def test_exp_inverts_log(self, rng):
        """Test exp_S(log_S(P)) = P"""
        s, p = _random_spd(rng, 3), _random_spd(rng, 3)
        assert np.allclose(exp_map(s, log_map(s, p)).matrix, p.matrix)


class TestMinEnclosingBall:
    """Test Euclidean minimum enclosing balls"""

    def test_square(self):
        """Test the corners of the unit square"""
        corners = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
        center, radius = min_enclosing_ball(corners)
        assert np.allclose(center, [0.5, 0.5])
        assert radius == pytest.approx(math.sqrt(0.5))

    def test_interior_point_ignored(self):
        """Test a point inside the ball of two others"""
        center, radius = min_enclosing_ball(np.array([[-1.0, 0.0], [1.0, 0.0], [0.0, 0.2]]))
        assert np.allclose(center, [0.0, 0.0])
        assert radius == pytest.approx(1.0)


class TestCircumcenter:
    """Test the minimax center"""

    def test_bundled_points(self):
        """Test the symmetric example is centered at I with radius sqrt(2) log 2"""
        result = circumcenter(parse_points(load_example("points-sl2")))
        assert np.allclose(result.center.matrix, np.eye(2), atol=1e-8)
        assert result.radius == pytest.approx(math.sqrt(2.0) * LN2, rel=1e-9)

    def test_unpacks(self):
        """Test (center, radius) unpacking"""
        center, radius = circumcenter([SpdPoint.identity(2)])
        assert radius == 0.0
        assert np.allclose(center.matrix, np.eye(2))

    def test_two_points(self):
        """Test two points give their geodesic midpoint"""
        a, b = SpdPoint([[2, 0], [0, 0.5]]), SpdPoint([[0.5, 0], [0, 2]])
        result = circumcenter([a, b])
        assert np.allclose(result.center.matrix, np.eye(2))
        assert result.radius == pytest.approx(math.sqrt(2.0) * LN2)

    def test_empty(self):
        """Test an empty point list is refused"""
        with pytest.raises(EmptyInputError):
            circumcenter([])

    def test_mixed_sizes(self):
        """Test points of different sizes are refused"""
        with pytest.raises(ValidationError):
            circumcenter([SpdPoint.identity(2), SpdPoint.identity(3), SpdPoint.identity(2)])

    def test_random_points_minimax(self, rng):
        """Test no input point is a better center than the circumcenter"""
        points = [_random_spd(rng, 2) for _ in range(6)]
        result = circumcenter(points)
        assert result.radius == pytest.approx(max(distance(result.center, p) for p in points))
        for p in points:
            assert result.radius <= max(distance(p, q) for q in points) + 1e-9

    def test_equivariance(self, rng):
        """Test the circumcenter of M[P_i] is M applied to the circumcenter"""
        points = [_random_spd(rng, 2) for _ in range(4)]
        m = np.array([[2.0, 1.0], [0.0, 1.0]])
        moved = circumcenter([act(m, p) for p in points])
        assert distance(moved.center, act(m, circumcenter(points).center)) < 1e-6


class TestDilatation:
    """Test K(A) and its bound by the displacement of I"""

    def test_values(self):
        """Test K(diag(2, 1)) = 2 and rotations have K = 1"""
        assert dilatation([[2, 0], [0, 1]]) == pytest.approx(2.0)
        assert dilatation([[0, -1], [1, 0]]) == pytest.approx(1.0)

    def test_gram_whitening(self):
        """Test a map conformal for a non-standard inner product"""
        gram = [[4, 0], [0, 1]]
        a = [[0, -0.5], [2, 0]]
        assert dilatation(a, gram) == pytest.approx(1.0)

    def test_singular(self):
        """Test a singular map has no dilatation"""
        with pytest.raises(SingularMatrixError):
            dilatation([[1, 0], [0, 0]])

    def test_bound(self, rng):
        """Test K(A) <= 1 + phi(d(I, A[I])) on random maps"""
        for _ in range(20):
            assert bound_check(rng.standard_normal((3, 3)))
