"""Isometric graded automorphism groups and finite group identification."""

from .finite_groups import GroupIdentification, identify_group, multiplication_table
from .iso_aut import (
    AutomorphismGroupReport,
    ConjugationVerdict,
    DistinguishedPlane,
    automorphism_report,
    distinguished_planes,
    enumerate_finite_ia,
    identity_component_dim,
    is_isometric_graded_auto,
    no_conjugation_verdict,
    rank_ad,
)

__all__ = [
    "rank_ad",
    "is_isometric_graded_auto",
    "identity_component_dim",
    "DistinguishedPlane",
    "distinguished_planes",
    "enumerate_finite_ia",
    "AutomorphismGroupReport",
    "automorphism_report",
    "ConjugationVerdict",
    "no_conjugation_verdict",
    "GroupIdentification",
    "multiplication_table",
    "identify_group",
]
