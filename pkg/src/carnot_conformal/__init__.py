"""
carnot-conformal

Exact Lie algebra arithmetic for nilpotent groups with a diagonal derivation,
homogeneous quasi-metrics, invariant conformal structures, isometric graded
automorphism groups and box-ring modulus bounds.

Example Usage:
    >>> from carnot_conformal import LieAlgebra, diagonal_pair, preserved_sequence
    >>>
    >>> pair = diagonal_pair(LieAlgebra.heisenberg(), (1, 1, 2))
    >>> preserved_sequence(pair).dims
    (0, 3)
    >>>
    >>> from carnot_conformal import example_pair, example_inner_products
    >>> from carnot_conformal import no_conjugation_verdict
    >>>
    >>> hxh = example_pair("hxh")
    >>> ips = example_inner_products("hxh")
    >>> no_conjugation_verdict(hxh, ips["d1"], ips["d2"]).verdict
    'IMPOSSIBLE'
"""

from .__version__ import (
    __author__,
    __description__,
    __email__,
    __license__,
    __url__,
    __version__,
)
from .algebra import (
    DiagonalHeintzePair,
    LieAlgebra,
    LieAlgebraBuilder,
    PreservedFlag,
    Subspace,
    bch_multiply,
    bracket,
    carnot_grading,
    diagonal_pair,
    direct_product,
    is_carnot_type,
    layer_decomposition,
    preserved_sequence,
    validate,
)
from .automorphisms import (
    automorphism_report,
    enumerate_finite_ia,
    identify_group,
    identity_component_dim,
    no_conjugation_verdict,
)
from .conformal import GeneratedGroup, SimilarityElement, invariant_structure, orbit_structure
from .constants import Command, Defaults, ExitCode, Tolerance, Verdict
from .exceptions import (
    CarnotConformalError,
    DimensionMismatchError,
    NonConvergentError,
    NotCarnotTypeError,
    NotFiniteError,
    NotNilpotentError,
    ValidationError,
)
from .io import example_pair, load_example
from .io.examples import example_inner_products
from .metric import (
    DInnerProduct,
    circumcenter,
    homogeneity_check,
    homogeneous_dimension,
    pansu_differential,
    quasi_distance,
    quasi_norm,
)
from .modulus import BoxRing, inclusion_check, rigidity_check, segment_family_modulus

__all__ = [
    # Version info
    "__version__",
    "__author__",
    "__email__",
    "__license__",
    "__description__",
    "__url__",
    # Algebra
    "LieAlgebra",
    "LieAlgebraBuilder",
    "Subspace",
    "validate",
    "bracket",
    "bch_multiply",
    "direct_product",
    # Heintze pairs
    "DiagonalHeintzePair",
    "PreservedFlag",
    "diagonal_pair",
    "layer_decomposition",
    "is_carnot_type",
    "carnot_grading",
    "preserved_sequence",
    # Metrics
    "DInnerProduct",
    "quasi_norm",
    "quasi_distance",
    "homogeneous_dimension",
    "homogeneity_check",
    "pansu_differential",
    "circumcenter",
    # Conformal structures
    "SimilarityElement",
    "GeneratedGroup",
    "orbit_structure",
    "invariant_structure",
    # Automorphisms
    "identity_component_dim",
    "enumerate_finite_ia",
    "identify_group",
    "automorphism_report",
    "no_conjugation_verdict",
    # Modulus
    "BoxRing",
    "segment_family_modulus",
    "inclusion_check",
    "rigidity_check",
    # Examples
    "load_example",
    "example_pair",
    "example_inner_products",
    # Constants
    "Tolerance",
    "Defaults",
    "Command",
    "Verdict",
    "ExitCode",
    # Exceptions
    "CarnotConformalError",
    "ValidationError",
    "DimensionMismatchError",
    "NotNilpotentError",
    "NotCarnotTypeError",
    "NotFiniteError",
    "NonConvergentError",
]
