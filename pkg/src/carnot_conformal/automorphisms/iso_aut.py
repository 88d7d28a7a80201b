"""
Isometric graded automorphisms

IA(n, <,>) is the group of graded automorphisms that are isometries on the
generating layers, the layers not contained in [n, n]. Its identity component
is measured by the dimension of the corresponding Lie algebra of derivations;
when that dimension is zero the finite group is enumerated exactly.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from ..algebra.heintze import DiagonalHeintzePair, _rational_spectrum
from ..algebra.lie_core import LieAlgebra, ad_matrix, derived_algebra
from ..algebra.linalg import ZERO, Matrix, Subspace, identity, inverse, nullspace, rank
from ..constants import Defaults, Verdict
from ..exceptions import (
    NotDiagonalizableError,
    NotFiniteError,
    SingularMatrixError,
    ValidationError,
)
from ..metric.homogeneous import DInnerProduct, is_graded_automorphism
from ..utils import format_exact, is_exact_zero, to_sympy
from .finite_groups import GroupIdentification, identify_group, matrix_key, tidy

logger = logging.getLogger(__name__)

# Closure of the plane correspondence stops growing past this many pairs.
MAX_CORRESPONDENCES = 512


def exact_rank(rows: Sequence[Sequence[Any]], ncols: int) -> int:
    """Rank over Q, or over the sympy number field the entries live in."""
    if all(isinstance(x, (int, Fraction)) for row in rows for x in row):
        return rank(rows, ncols)
    if not rows:
        return 0
    return sympy.Matrix([[to_sympy(x) for x in row] for row in rows]).rank(simplify=True)


def rank_ad(algebra: LieAlgebra, x: Sequence[Any]) -> int:
    """Rank of ad_x, exact for rational and surd coordinates."""
    return exact_rank(ad_matrix(algebra, x), algebra.dim)


def generating_layers(pair: DiagonalHeintzePair) -> Tuple[int, ...]:
    """Indices of the layers not contained in [n, n]."""
    derived = derived_algebra(pair.algebra)
    return tuple(
        i for i, layer in enumerate(pair.layers) if not derived.contains_subspace(layer.space)
    )


def _column(a: Sequence[Sequence[Any]], i: int) -> Tuple[Any, ...]:
    return tuple(row[i] for row in a)


def _apply(a: Sequence[Sequence[Any]], v: Sequence[Any]) -> Tuple[Any, ...]:
    return tuple(tidy(sum((x * y for x, y in zip(row, v)), ZERO)) for row in a)


def is_isometric_graded_auto(
    pair: DiagonalHeintzePair, ip: DInnerProduct, a: Sequence[Sequence[Any]]
) -> bool:
    """
    Check that A is a graded automorphism and <Au, Av> = <u, v> on each generating layer.

    Raises:
        SingularMatrixError: If A is not invertible
    """
    if not is_graded_automorphism(pair, a):
        return False
    for index in generating_layers(pair):
        rows = pair.layers[index].space.rows
        images = [_apply(a, u) for u in rows]
        for p, (u, au) in enumerate(zip(rows, images)):
            for v, av in zip(rows[p:], images[p:]):
                if not is_exact_zero(to_sympy(ip.inner(au, av)) - to_sympy(ip.inner(u, v))):
                    return False
    return True


# ==============================================================================
# Linear systems in matrix unknowns
# ==============================================================================


def _unit_matrix(n: int, r: int, c: int) -> Matrix:
    return tuple(
        tuple(Fraction(1) if (i, j) == (r, c) else ZERO for j in range(n)) for i in range(n)
    )


def _constraint_rows(n: int, constraint: Callable[[Matrix], List[Any]]) -> List[List[Any]]:
    """Rows of the linear system constraint(T) = 0 in the n^2 entries of T."""
    columns = [constraint(_unit_matrix(n, r, c)) for r in range(n) for c in range(n)]
    return [list(row) for row in zip(*columns)]


def _as_matrix(n: int, vector: Sequence[Fraction]) -> Matrix:
    return tuple(tuple(vector[r * n : (r + 1) * n]) for r in range(n))


def _layer_preservation(pair: DiagonalHeintzePair, t: Matrix) -> List[Any]:
    values = []
    for layer in pair.layers:
        forms = layer.space.annihilator()
        for u in layer.space.rows:
            image = _apply(t, u)
            values.extend(sum((f * x for f, x in zip(form, image)), ZERO) for form in forms)
    return values


def identity_component_dim(pair: DiagonalHeintzePair, ip: DInnerProduct) -> int:
    """
    Dimension of the Lie algebra of IA(n, <,>).

    Its elements are layer-preserving derivations that are skew with respect
    to <,> on every generating layer.
    """
    algebra = pair.algebra
    n = pair.dim
    units = algebra.units
    generating = generating_layers(pair)

    def constraint(delta: Matrix) -> List[Any]:
        values: List[Any] = []
        for i in range(n):
            for j in range(i + 1, n):
                lhs = _apply(delta, algebra.bracket(units[i], units[j]))
                first = algebra.bracket(_column(delta, i), units[j])
                second = algebra.bracket(units[i], _column(delta, j))
                values.extend(p - q - r for p, q, r in zip(lhs, first, second))
        values.extend(_layer_preservation(pair, delta))
        for index in generating:
            rows = pair.layers[index].space.rows
            for p, u in enumerate(rows):
                for v in rows[p:]:
                    values.append(ip.inner(_apply(delta, u), v) + ip.inner(u, _apply(delta, v)))
        return values

    rows = _constraint_rows(n, constraint)
    dim = n * n - exact_rank(rows, n * n)
    logger.debug("identity component of IA has dimension %d", dim)
    return dim


# ==============================================================================
# Distinguished planes
# ==============================================================================


@dataclass(frozen=True)
class DistinguishedPlane:
    """A joint eigenspace of the graded centroid inside a generating layer."""

    layer: int
    space: Subspace
    rank: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "layer": self.layer + 1,
            "dim": self.space.dim,
            "rank_ad": self.rank,
            "basis": [[format_exact(x) for x in row] for row in self.space.rows],
        }


def graded_centroid(pair: DiagonalHeintzePair) -> List[Matrix]:
    """Basis of {T layer-preserving : T[x, y] = [Tx, y] for all x, y}."""
    algebra = pair.algebra
    n = pair.dim
    units = algebra.units

    def constraint(t: Matrix) -> List[Any]:
        values: List[Any] = []
        for i in range(n):
            for j in range(n):
                lhs = _apply(t, algebra.bracket(units[i], units[j]))
                rhs = algebra.bracket(_column(t, i), units[j])
                values.extend(p - q for p, q in zip(lhs, rhs))
        values.extend(_layer_preservation(pair, t))
        return values

    return [_as_matrix(n, v) for v in nullspace(_constraint_rows(n, constraint), n * n)]


def _commutator(a: Matrix, b: Matrix) -> List[Fraction]:
    n = len(a)
    return [
        sum((a[r][k] * b[k][c] - b[r][k] * a[k][c] for k in range(n)), ZERO)
        for r in range(n)
        for c in range(n)
    ]


def centroid_center(pair: DiagonalHeintzePair) -> List[Matrix]:
    """Basis of the center of the graded centroid."""
    basis = graded_centroid(pair)
    if not basis:
        return []
    n = pair.dim
    commutators = [[_commutator(z, s) for s in basis] for z in basis]
    rows = [
        [commutators[k][s][entry] for k in range(len(basis))]
        for s in range(len(basis))
        for entry in range(n * n)
    ]
    out = []
    for coeffs in nullspace(rows, len(basis)):
        out.append(
            tuple(
                tuple(sum((c * z[r][col] for c, z in zip(coeffs, basis)), ZERO) for col in range(n))
                for r in range(n)
            )
        )
    return out


def _restrict(space: Subspace, t: Matrix) -> Matrix:
    columns = [space.coordinates(_apply(t, u)) for u in space.rows]
    return tuple(tuple(col[r] for col in columns) for r in range(space.dim))


def distinguished_planes(
    pair: DiagonalHeintzePair, seed: int = Defaults.SEED
) -> Tuple[DistinguishedPlane, ...]:
    """
    Split each generating layer into eigenspaces of a generic central element
    of the graded centroid.

    Every vector of a plane has the same rank of ad, checked on the echelon
    basis and on a seeded generic vector.

    Raises:
        NotFiniteError: If the split is not into rational eigenspaces or the
            rank of ad varies within a plane
    """
    rng = np.random.default_rng(seed)
    center = centroid_center(pair)
    n = pair.dim
    coefficients = [Fraction(int(c)) for c in rng.integers(1, 1000, size=len(center))]
    generic = tuple(
        tuple(sum((c * z[r][col] for c, z in zip(coefficients, center)), ZERO) for col in range(n))
        for r in range(n)
    )
    planes: List[DistinguishedPlane] = []
    for index in generating_layers(pair):
        space = pair.layers[index].space
        block = _restrict(space, generic) if center else identity(space.dim)
        try:
            spectrum = _rational_spectrum(block)
        except NotDiagonalizableError as exc:
            raise NotFiniteError(
                f"centroid does not split layer {index + 1} over Q: {exc}"
            ) from exc
        found = 0
        for mu in spectrum:
            shifted = [
                [x - (mu if r == c else 0) for c, x in enumerate(row)]
                for r, row in enumerate(block)
            ]
            vectors = [
                tuple(sum((k * u[i] for k, u in zip(coords, space.rows)), ZERO) for i in range(n))
                for coords in nullspace(shifted, space.dim)
            ]
            plane = Subspace.span(vectors, n)
            found += plane.dim
            planes.append(DistinguishedPlane(index, plane, _plane_rank(pair, plane, rng)))
        if found != space.dim:
            raise NotFiniteError(f"centroid is not diagonalizable on layer {index + 1}")
    logger.debug("distinguished planes: %s", [(p.layer + 1, p.space.dim, p.rank) for p in planes])
    return tuple(planes)


def _plane_rank(pair: DiagonalHeintzePair, plane: Subspace, rng: np.random.Generator) -> int:
    algebra = pair.algebra
    weights = [Fraction(int(c)) for c in rng.integers(1, 1000, size=plane.dim)]
    generic = tuple(
        sum((w * row[i] for w, row in zip(weights, plane.rows)), ZERO) for i in range(pair.dim)
    )
    ranks = {rank_ad(algebra, row) for row in plane.rows} | {rank_ad(algebra, generic)}
    if len(ranks) != 1:
        raise NotFiniteError(f"rank of ad is not constant on plane {plane}")
    return ranks.pop()


# ==============================================================================
# Enumeration of a finite IA
# ==============================================================================


def _perp(ip: DInnerProduct, layer: Subspace, sub: Subspace) -> Subspace:
    """Orthogonal complement of sub inside layer."""
    n = layer.ambient_dim
    rows = [[ip.inner(w, u) for w in layer.rows] for u in sub.rows]
    vectors = [
        tuple(sum((k * w[i] for k, w in zip(coords, layer.rows)), ZERO) for i in range(n))
        for coords in nullspace(rows, layer.dim)
    ]
    return Subspace.span(vectors, n)


def _layer_of(pair: DiagonalHeintzePair, sub: Subspace) -> int:
    for i, layer in enumerate(pair.layers):
        if layer.space.contains_subspace(sub):
            return i
    raise NotFiniteError(f"{sub} is not inside a single layer")


def _propagate(
    pair: DiagonalHeintzePair, ip: DInnerProduct, seed: Dict[Subspace, Subspace]
) -> Optional[Dict[Subspace, Subspace]]:
    """
    Close a correspondence source -> target under orthogonal complements and
    intersections within each layer.

    Returns None when two rules force different targets for one source.
    """
    mapping: Dict[Subspace, Subspace] = {}

    def add(source: Subspace, target: Subspace) -> Optional[bool]:
        if source.dim != target.dim:
            return None
        layer = pair.layers[_layer_of(pair, source)].space if source.dim else None
        if source.dim == 0 or (source == layer and source.dim > 1):
            return False
        if source in mapping:
            return None if mapping[source] != target else False
        mapping[source] = target
        return True

    for source, target in seed.items():
        if add(source, target) is None:
            return None
    changed = True
    while changed:
        changed = False
        items = list(mapping.items())
        derived = []
        for source, target in items:
            layer = pair.layers[_layer_of(pair, source)].space
            derived.append((_perp(ip, layer, source), _perp(ip, layer, target)))
        for (s1, t1), (s2, t2) in itertools.combinations(items, 2):
            if _layer_of(pair, s1) == _layer_of(pair, s2):
                derived.append((s1.intersection(s2), t1.intersection(t2)))
        for source, target in derived:
            outcome = add(source, target)
            if outcome is None:
                return None
            changed = changed or outcome
        if len(mapping) > MAX_CORRESPONDENCES:
            raise NotFiniteError("plane correspondence does not close")
    return mapping


def _line_frame(
    pair: DiagonalHeintzePair, mapping: Dict[Subspace, Subspace]
) -> List[Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]]:
    """
    Determined lines spanning every generating layer, as (source, target) rows.

    Raises:
        NotFiniteError: If the determined lines do not span a generating layer
    """
    lines = sorted(
        ((s, t) for s, t in mapping.items() if s.dim == 1),
        key=lambda st: (_layer_of(pair, st[0]), st[0].rows),
    )
    frame = []
    for index in generating_layers(pair):
        layer = pair.layers[index].space
        span = Subspace.zero(pair.dim)
        for source, target in lines:
            if layer.contains_subspace(source) and not span.contains_subspace(source):
                span = span + source
                frame.append((source.rows[0], target.rows[0]))
        if span.dim != layer.dim:
            raise NotFiniteError(f"layer {index + 1} does not split into determined lines")
    return frame


def _extend_to_derived(
    pair: DiagonalHeintzePair, known: List[Tuple[Fraction, Tuple[Any, ...], Tuple[Any, ...]]]
) -> None:
    """Define A on each remaining layer through brackets of lower layers."""
    algebra = pair.algebra
    generating = set(generating_layers(pair))
    for index, layer in enumerate(pair.layers):
        if index in generating:
            continue
        basis = Subspace.zero(pair.dim)
        for (ev1, v1, i1), (ev2, v2, i2) in itertools.combinations(list(known), 2):
            if ev1 + ev2 != layer.eigenvalue:
                continue
            br = algebra.bracket(v1, v2)
            if basis.contains(br):
                continue
            basis = basis + Subspace.span([br], pair.dim)
            known.append((layer.eigenvalue, br, tuple(tidy(x) for x in algebra.bracket(i1, i2))))
            if basis.dim == layer.dim:
                break
        if basis.dim != layer.dim:
            raise NotFiniteError(f"layer {index + 1} is not spanned by brackets of lower layers")


def _assemble(
    pair: DiagonalHeintzePair,
    ip: DInnerProduct,
    frame: Sequence[Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]],
    signs: Sequence[int],
) -> Optional[Matrix]:
    known: List[Tuple[Fraction, Tuple[Any, ...], Tuple[Any, ...]]] = []
    for (u, w), sign in zip(frame, signs):
        ratio = ip.inner(u, u) / ip.inner(w, w)
        c = tidy(sign * sympy.sqrt(to_sympy(ratio)))
        eigenvalue = pair.layers[_layer_of(pair, Subspace.span([u], pair.dim))].eigenvalue
        known.append((eigenvalue, u, tuple(tidy(c * x) for x in w)))
    _extend_to_derived(pair, known)
    n = pair.dim
    sources = [v for _, v, _ in known]
    if rank(sources, n) != n:
        return None
    b_inv = inverse(tuple(tuple(v[r] for v in sources) for r in range(n)))
    images = [img for _, _, img in known]
    return tuple(
        tuple(tidy(sum((images[k][r] * b_inv[k][c] for k in range(n)), ZERO)) for c in range(n))
        for r in range(n)
    )


def enumerate_finite_ia(
    pair: DiagonalHeintzePair, ip: DInnerProduct, seed: int = Defaults.SEED
) -> Tuple[Matrix, ...]:
    """
    All elements of a finite IA(n, <,>), exactly.

    Distinguished planes of equal layer, dimension and rank are permuted; each
    permutation is closed under complements and intersections until the
    generating layers split into lines, and every sign choice on those lines
    is extended through brackets and checked.

    Returns:
        The elements sorted by their exact entries

    Raises:
        NotFiniteError: If the identity component is positive dimensional or
            the generating layers do not split into determined lines
        ValidationError: If the Gram matrix is not rational
    """
    if not ip.rational:
        raise ValidationError("enumeration needs a rational Gram matrix")
    dim = identity_component_dim(pair, ip)
    if dim > 0:
        raise NotFiniteError(f"IA has a {dim}-dimensional identity component")
    planes = distinguished_planes(pair, seed)
    classes: Dict[Tuple[int, int, int], List[DistinguishedPlane]] = {}
    for plane in planes:
        classes.setdefault((plane.layer, plane.space.dim, plane.rank), []).append(plane)
    groups = list(classes.values())
    found: Dict[Tuple[str, ...], Matrix] = {}
    for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
        correspondence = {
            p.space: q.space for group, images in zip(groups, choice) for p, q in zip(group, images)
        }
        mapping = _propagate(pair, ip, correspondence)
        if mapping is None:
            logger.debug("plane permutation is inconsistent")
            continue
        frame = _line_frame(pair, mapping)
        for signs in itertools.product((1, -1), repeat=len(frame)):
            a = _assemble(pair, ip, frame, signs)
            if a is None:
                continue
            try:
                if is_isometric_graded_auto(pair, ip, a):
                    found.setdefault(matrix_key(a), a)
            except SingularMatrixError:
                continue
    logger.info("enumerated %d isometric graded automorphisms", len(found))
    return tuple(found[k] for k in sorted(found))


@dataclass(frozen=True)
class AutomorphismGroupReport:
    """Identity component dimension and, when finite, the enumerated group."""

    component_dim: int
    planes: Tuple[DistinguishedPlane, ...] = ()
    elements: Tuple[Matrix, ...] = ()
    identification: Optional[GroupIdentification] = None

    @property
    def finite(self) -> bool:
        return self.identification is not None

    def to_dict(self, include_elements: bool = False) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "component_dim": self.component_dim,
            "planes": [p.to_dict() for p in self.planes],
        }
        if self.identification is not None:
            out.update(self.identification.to_dict())
        if include_elements:
            out["elements"] = [[[format_exact(x) for x in row] for row in a] for a in self.elements]
        return out


def automorphism_report(
    pair: DiagonalHeintzePair, ip: DInnerProduct, seed: int = Defaults.SEED
) -> AutomorphismGroupReport:
    """Identity component dimension, plus the finite group when that is zero."""
    dim = identity_component_dim(pair, ip)
    try:
        planes = distinguished_planes(pair, seed)
    except NotFiniteError as exc:
        logger.warning("no distinguished planes: %s", exc)
        planes = ()
    if dim > 0:
        return AutomorphismGroupReport(dim, planes)
    elements = enumerate_finite_ia(pair, ip, seed)
    return AutomorphismGroupReport(dim, planes, elements, identify_group(elements))


@dataclass(frozen=True)
class ConjugationVerdict:
    """Outcome of comparing IA for two inner products."""

    verdict: str
    first: AutomorphismGroupReport
    second: AutomorphismGroupReport
    reasons: Tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict,
            "d1": self.first.to_dict(),
            "d2": self.second.to_dict(),
            "reasons": list(self.reasons),
        }


def no_conjugation_verdict(
    pair: DiagonalHeintzePair,
    first: DInnerProduct,
    second: DInnerProduct,
    seed: int = Defaults.SEED,
) -> ConjugationVerdict:
    """
    Decide whether similarity groups for the two inner products can be conjugate.

    Conjugation would carry IA of the first into IA of the second, so a
    larger identity component, or with both finite a larger order, on the
    first side rules it out. Any other outcome is inconclusive.
    """
    one = automorphism_report(pair, first, seed)
    two = automorphism_report(pair, second, seed)
    reasons = []
    if one.component_dim > two.component_dim:
        reasons.append(f"dim IA1 = {one.component_dim} > dim IA2 = {two.component_dim}")
    elif one.finite and two.finite and len(one.elements) > len(two.elements):
        reasons.append(f"|IA1| = {len(one.elements)} > |IA2| = {len(two.elements)}")
    verdict = Verdict.IMPOSSIBLE if reasons else Verdict.INCONCLUSIVE
    logger.info("conjugation verdict %s", verdict)
    return ConjugationVerdict(verdict, one, two, tuple(reasons))


__all__ = [
    "exact_rank",
    "rank_ad",
    "generating_layers",
    "is_isometric_graded_auto",
    "identity_component_dim",
    "DistinguishedPlane",
    "graded_centroid",
    "centroid_center",
    "distinguished_planes",
    "enumerate_finite_ia",
    "AutomorphismGroupReport",
    "automorphism_report",
    "ConjugationVerdict",
    "no_conjugation_verdict",
]
