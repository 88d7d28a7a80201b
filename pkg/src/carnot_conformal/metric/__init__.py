"""
Homogeneous quasi-norms, Pansu differentials and the symmetric space SL(m)/SO(m).
"""

from .homogeneous import (
    AffineMap,
    CallableMap,
    ComposedMap,
    ContactShear,
    DInnerProduct,
    GroupMap,
    HomogeneityReport,
    carnot_dilation,
    carnot_dilation_matrix,
    conjugate_map,
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
from .pansu import PansuResult, pansu_differential
from .symmetric_space import (
    Circumcenter,
    SpdPoint,
    act,
    bound_check,
    circumcenter,
    dilatation,
    distance,
    exp_map,
    geodesic,
    log_map,
    phi,
)

__all__ = [
    # Quasi-norms
    "DInnerProduct",
    "quasi_norm",
    "quasi_distance",
    "dilation",
    "carnot_dilation",
    "carnot_dilation_matrix",
    "homogeneous_dimension",
    "is_automorphism",
    "is_graded_automorphism",
    "empirical_bilip_constant",
    "quasi_triangle_constant",
    "HomogeneityReport",
    "homogeneity_check",
    # Maps
    "GroupMap",
    "AffineMap",
    "CallableMap",
    "ContactShear",
    "ComposedMap",
    "conjugate_map",
    # Pansu
    "PansuResult",
    "pansu_differential",
    # Symmetric space
    "SpdPoint",
    "Circumcenter",
    "act",
    "distance",
    "geodesic",
    "log_map",
    "exp_map",
    "circumcenter",
    "phi",
    "dilatation",
    "bound_check",
]
