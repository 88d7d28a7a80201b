"""Similarity groups and the conformal structures they preserve."""

from .similarity import GeneratedGroup, SimilarityElement, compose, conjugate_by, invert
from .structure import (
    BlowupReport,
    ConformalPoint,
    Orbit,
    blowup_demo,
    constant_field,
    fiber_pullback,
    invariance_residual,
    invariant_structure,
    orbit_structure,
    pullback,
    pullback_field,
)

__all__ = [
    "SimilarityElement",
    "GeneratedGroup",
    "compose",
    "invert",
    "conjugate_by",
    "ConformalPoint",
    "Orbit",
    "constant_field",
    "pullback",
    "pullback_field",
    "fiber_pullback",
    "orbit_structure",
    "invariant_structure",
    "invariance_residual",
    "BlowupReport",
    "blowup_demo",
]
