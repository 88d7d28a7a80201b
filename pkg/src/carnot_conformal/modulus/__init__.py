"""Box rings and the modulus bounds of segment families."""

from .box_ring import (
    BoxRing,
    InclusionResult,
    PaddingTable,
    RigidityReport,
    SegmentModulus,
    first_layer_padding,
    inclusion_check,
    padding_from_polynomials,
    padding_polynomials,
    rescale_ring,
    rigidity_check,
    ring_for_map,
    segment_family_modulus,
    upper_volume_bound,
)

__all__ = [
    "BoxRing",
    "SegmentModulus",
    "segment_family_modulus",
    "upper_volume_bound",
    "rescale_ring",
    "PaddingTable",
    "padding_polynomials",
    "padding_from_polynomials",
    "first_layer_padding",
    "InclusionResult",
    "inclusion_check",
    "RigidityReport",
    "rigidity_check",
    "ring_for_map",
]
