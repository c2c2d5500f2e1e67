"""Minimal null scrolls in the Lorentzian Heisenberg group Nil3."""
from .construct import (construct_beta_half, construct_beta_zero, construct_from_ar_data, construct_from_curvature,
                        construct_gallery, construct_tangent, example_gallery)
from .errors import DomainError, NilscrollError, ValidationError
from .scroll import NullChart, NullScroll, mean_curvature, minimality_class

__all__ = [
    "construct_beta_half", "construct_beta_zero", "construct_from_ar_data", "construct_from_curvature",
    "construct_gallery", "construct_tangent", "example_gallery", "DomainError", "NilscrollError",
    "ValidationError", "NullChart", "NullScroll", "mean_curvature", "minimality_class",
]
