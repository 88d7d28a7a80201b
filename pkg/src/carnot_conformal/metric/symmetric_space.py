"""
The symmetric space SL(m)/SO(m)

Points are symmetric positive definite matrices of determinant one. GL(m)
acts by M[S] = |det M|^{-2/m} M S M^T, and the invariant distance is
d(S1, S2) = sqrt(sum log^2 mu_i) over the eigenvalues mu_i of S1^{-1} S2.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from ..constants import Defaults, Tolerance
from ..exceptions import NonConvergentError, SingularMatrixError, ValidationError
from ..utils import validate_non_empty_list

logger = logging.getLogger(__name__)

ArrayLike = Union[np.ndarray, Sequence[Sequence[Any]]]


def _as_array(matrix: ArrayLike) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in matrix], dtype=float)


@dataclass(frozen=True, eq=False)
class SpdPoint:
    """
    A point of SL(m)/SO(m).

    The matrix is symmetrized and rescaled to determinant one on construction.

    Raises:
        ValidationError: If the input is not square, not symmetric to 1e-12
            relative, or not positive definite
    """

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = _as_array(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise ValidationError(f"SPD point must be a square matrix, got shape {m.shape}")
        scale = max(1.0, float(np.max(np.abs(m))))
        if float(np.max(np.abs(m - m.T))) > Tolerance.SYMMETRY * scale:
            raise ValidationError("SPD point is not symmetric")
        m = (m + m.T) / 2
        eigenvalues = np.linalg.eigvalsh(m)
        if eigenvalues[0] <= 0:
            raise ValidationError(
                f"SPD point is not positive definite (min eigenvalue {eigenvalues[0]:.3g})"
            )
        log_det = float(np.sum(np.log(eigenvalues)))
        m = m * math.exp(-log_det / m.shape[0])
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, m: int) -> "SpdPoint":
        return cls(np.eye(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def to_list(self) -> List[List[float]]:
        return self.matrix.tolist()

    def __repr__(self) -> str:
        return f"SpdPoint({np.array2string(self.matrix, precision=6)})"


def _spectral(s: np.ndarray, func) -> np.ndarray:
    w, v = np.linalg.eigh(s)
    w = np.maximum(w, Tolerance.EIGENVALUE_CLAMP)
    return (v * func(w)) @ v.T


def spd_power(s: np.ndarray, p: float) -> np.ndarray:
    return _spectral(s, lambda w: w**p)


def spd_sqrt(s: np.ndarray) -> np.ndarray:
    return _spectral(s, np.sqrt)


def spd_log(s: np.ndarray) -> np.ndarray:
    return _spectral(s, np.log)


def sym_exp(y: np.ndarray) -> np.ndarray:
    """Exponential of a symmetric matrix."""
    w, v = np.linalg.eigh((y + y.T) / 2)
    return (v * np.exp(w)) @ v.T


def log_map(base: SpdPoint, point: SpdPoint) -> np.ndarray:
    """Tangent vector at base pointing to point: S^{1/2} log(S^{-1/2} P S^{-1/2}) S^{1/2}."""
    root = spd_sqrt(base.matrix)
    inv_root = spd_power(base.matrix, -0.5)
    return root @ spd_log(inv_root @ point.matrix @ inv_root) @ root


def exp_map(base: SpdPoint, tangent: np.ndarray) -> SpdPoint:
    root = spd_sqrt(base.matrix)
    inv_root = spd_power(base.matrix, -0.5)
    return SpdPoint(root @ sym_exp(inv_root @ tangent @ inv_root) @ root)


def act(m: ArrayLike, s: SpdPoint) -> SpdPoint:
    """
    M[S] = |det M|^{-2/m} M S M^T.

    Raises:
        SingularMatrixError: If det M = 0
    """
    a = _as_array(m)
    if a.shape != s.matrix.shape:
        raise ValidationError(f"cannot act by a {a.shape} matrix on a {s.matrix.shape} point")
    det = np.linalg.det(a)
    if det == 0 or not np.isfinite(det):
        raise SingularMatrixError("acting matrix is singular")
    image = a @ s.matrix @ a.T
    return SpdPoint((image + image.T) / 2 * abs(det) ** (-2.0 / a.shape[0]))


def distance(s1: SpdPoint, s2: SpdPoint) -> float:
    """Riemannian distance, from the generalized eigenvalues of (S2, S1)."""
    mu = linalg.eigh(s2.matrix, s1.matrix, eigvals_only=True)
    mu = np.maximum(mu, Tolerance.EIGENVALUE_CLAMP)
    return float(np.sqrt(np.sum(np.log(mu) ** 2)))


def geodesic(s1: SpdPoint, s2: SpdPoint, t: float) -> SpdPoint:
    """
    The geodesic S1^{1/2} (S1^{-1/2} S2 S1^{-1/2})^t S1^{1/2}.

    Endpoints are returned unchanged.
    """
    if t == 0:
        return s1
    if t == 1:
        return s2
    root = spd_sqrt(s1.matrix)
    inv_root = spd_power(s1.matrix, -0.5)
    return SpdPoint(root @ spd_power(inv_root @ s2.matrix @ inv_root, t) @ root)


# ============================================================================
# CIRCUMCENTER
# ============================================================================


@dataclass(frozen=True)
class Circumcenter:
    """Minimax center, its radius and the iterations spent."""

    center: SpdPoint
    radius: float
    iterations: int = 0

    def __iter__(self) -> Iterator[Any]:
        yield self.center
        yield self.radius


def _vectorize(y: np.ndarray) -> np.ndarray:
    """Frobenius-isometric coordinates of a symmetric matrix."""
    rows, cols = np.triu_indices(y.shape[0])
    weights = np.where(rows == cols, 1.0, math.sqrt(2.0))
    return y[rows, cols] * weights


def _unvectorize(v: np.ndarray, m: int) -> np.ndarray:
    rows, cols = np.triu_indices(m)
    weights = np.where(rows == cols, 1.0, math.sqrt(2.0))
    y = np.zeros((m, m))
    y[rows, cols] = v / weights
    y[cols, rows] = v / weights
    return y


def _circumsphere(points: np.ndarray) -> Tuple[np.ndarray, float]:
    """Sphere through all points with center in their affine hull."""
    base = points[0]
    if len(points) == 1:
        return base.copy(), 0.0
    u = points[1:] - base
    b = 0.5 * np.sum(u * u, axis=1)
    coefficients = np.linalg.lstsq(u @ u.T, b, rcond=None)[0]
    center = base + u.T @ coefficients
    return center, float(np.max(np.linalg.norm(points - center, axis=1)))


def min_enclosing_ball(points: np.ndarray, eps: float = 1e-13) -> Tuple[np.ndarray, float]:
    """
    Smallest enclosing ball of points in R^d by Welzl's recursion.

    Points are processed in input order, so the result is deterministic.
    """
    d = points.shape[1]
    slack = eps * max(1.0, float(np.max(np.abs(points))))

    def solve(count: int, boundary: List[int]) -> Tuple[Optional[np.ndarray], float]:
        if boundary:
            center, radius = _circumsphere(points[boundary])
        else:
            center, radius = None, -1.0
        if len(boundary) == d + 1:
            return center, radius
        for i in range(count):
            if center is None or np.linalg.norm(points[i] - center) > radius + slack:
                center, radius = solve(i, boundary + [i])
        return center, radius

    center, radius = solve(len(points), [])
    return center, radius


def _whitened_logs(center: SpdPoint, points: Sequence[SpdPoint]) -> List[np.ndarray]:
    inv_root = spd_power(center.matrix, -0.5)
    return [spd_log(inv_root @ p.matrix @ inv_root) for p in points]


def _move(center: SpdPoint, direction: np.ndarray) -> SpdPoint:
    """exp at center of a tangent vector given in whitened coordinates."""
    root = spd_sqrt(center.matrix)
    return SpdPoint(root @ sym_exp(direction) @ root)


def _tangent_center(center: SpdPoint, points: Sequence[SpdPoint]) -> np.ndarray:
    logs = _whitened_logs(center, points)
    ball_center, _ = min_enclosing_ball(np.array([_vectorize(y) for y in logs]))
    return _unvectorize(ball_center, center.dim)


def _warm_start(points: Sequence[SpdPoint], tol: float) -> SpdPoint:
    """Farthest-point geodesic steps with step 1/(k+2), ties averaged."""
    center = points[0]
    ties = 0
    for k in range(Defaults.WARM_START_ITERATIONS):
        logs = _whitened_logs(center, points)
        norms = [float(np.linalg.norm(y)) for y in logs]
        top = max(norms)
        farthest = [y for y, r in zip(logs, norms) if r >= top - tol]
        if len(farthest) > 1:
            ties += 1
        center = _move(center, sum(farthest) / len(farthest) / (k + 2))
    if ties:
        logger.debug("warm start averaged tied farthest points in %d steps", ties)
    return center


def circumcenter(
    points: Sequence[SpdPoint],
    tol: float = Defaults.TOL,
    max_iterations: int = Defaults.MAX_ITERATIONS,
) -> Circumcenter:
    """
    The unique minimizer of S -> max_i d(S, P_i).

    A farthest-point warm start is refined by tangent-space minimum enclosing
    balls: the log images of the points at the current iterate are enclosed
    exactly and the iterate moves to the exponential of the ball center. The
    fixed point, where that center is zero, is the circumcenter.

    Args:
        points: Nonempty list of points of the same size
        tol: Stop once the tangent shift has norm below tol
        max_iterations: Cap on warm start plus refinement iterations

    Returns:
        Center, radius and the iterations spent

    Raises:
        EmptyInputError: If points is empty
        NonConvergentError: If the cap is reached
    """
    validate_non_empty_list(points, "points")
    if len({p.dim for p in points}) != 1:
        raise ValidationError("points have different sizes")
    if len(points) == 1:
        return Circumcenter(points[0], 0.0, 0)
    if len(points) == 2:
        midpoint = geodesic(points[0], points[1], 0.5)
        return Circumcenter(midpoint, distance(points[0], points[1]) / 2, 0)
    center = _warm_start(points, tol)
    iterations = Defaults.WARM_START_ITERATIONS
    shift = _tangent_center(center, points)
    size = float(np.linalg.norm(shift))
    while size >= tol:
        if iterations >= max_iterations:
            raise NonConvergentError(f"circumcenter shift {size:.3g} after {iterations} iterations")
        step = 1.0
        while True:
            trial = _move(center, step * shift)
            trial_shift = _tangent_center(trial, points)
            trial_size = float(np.linalg.norm(trial_shift))
            if trial_size < size or step < 1e-3:
                break
            step /= 2
        center, shift, size = trial, trial_shift, trial_size
        iterations += 1
        logger.debug("circumcenter iteration %d shift %.3g", iterations, size)
    radius = max(distance(center, p) for p in points)
    logger.info(
        "circumcenter of %d points: radius %.12g, %d iterations", len(points), radius, iterations
    )
    return Circumcenter(center, radius, iterations)


# ============================================================================
# DILATATION
# ============================================================================


def phi(t: float) -> float:
    """The control function e^t - 1 of the dilatation bound."""
    return math.expm1(t)


def _whiten(a: ArrayLike, gram: Optional[ArrayLike]) -> np.ndarray:
    m = _as_array(a)
    if gram is None:
        return m
    g = _as_array(gram)
    return spd_sqrt(g) @ m @ spd_power(g, -0.5)


def dilatation(a: ArrayLike, gram: Optional[ArrayLike] = None) -> float:
    """
    K(A) = max |AX| / min |AX| over unit X.

    Args:
        a: Invertible linear map
        gram: Inner product on the domain and target (default Euclidean)

    Raises:
        SingularMatrixError: If A is singular
    """
    sigma = np.linalg.svd(_whiten(a, gram), compute_uv=False)
    if sigma[-1] <= 0.0:
        raise SingularMatrixError("linear map is singular")
    return float(sigma[0] / sigma[-1])


def bound_check(a: ArrayLike, gram: Optional[ArrayLike] = None) -> bool:
    """K(A) <= 1 + phi(d(I, A[I]))."""
    b = _whiten(a, gram)
    k = dilatation(b)
    identity = SpdPoint.identity(b.shape[0])
    bound = 1.0 + phi(distance(identity, act(b, identity)))
    return k <= bound * (1.0 + Tolerance.BOX_SLACK)


__all__ = [
    "SpdPoint",
    "Circumcenter",
    "spd_power",
    "spd_sqrt",
    "spd_log",
    "sym_exp",
    "log_map",
    "exp_map",
    "act",
    "distance",
    "geodesic",
    "min_enclosing_ball",
    "circumcenter",
    "phi",
    "dilatation",
    "bound_check",
]
