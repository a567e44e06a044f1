"""Splitting types of (log) tangent bundles along rational curves on
complete intersections, computed exactly over prime fields and Q."""

from __future__ import annotations

__version__ = "0.1.0"

from .algebra import BinaryForm, FieldSpec, MultiForm, RationalCurveMap, bf_gcd, jacobian, substitute
from .cigeom import CIModel, freeness_verdict
from .construct import cover_compose, prop_line_instance, validate_profile
from .nodal import construct_K, nodal_cohomology, verify_vanishings
from .p1sheaf import FreeComplex, FreeSum, SheafMap, SplittingType, cech_cohomology, splitting_type

__all__ = [
    "BinaryForm",
    "FieldSpec",
    "MultiForm",
    "RationalCurveMap",
    "bf_gcd",
    "jacobian",
    "substitute",
    "CIModel",
    "freeness_verdict",
    "cover_compose",
    "prop_line_instance",
    "validate_profile",
    "construct_K",
    "nodal_cohomology",
    "verify_vanishings",
    "FreeComplex",
    "FreeSum",
    "SheafMap",
    "SplittingType",
    "cech_cohomology",
    "splitting_type",
]
