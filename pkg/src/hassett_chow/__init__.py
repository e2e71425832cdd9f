"""Strata, principal relations and Chow groups of genus-zero weighted moduli spaces."""

from .presentation import chow_groups, poincare_polynomial, verify_presentation
from .strata import enumerate_strata
from .weights import chamber_signature, new_weight_datum, parse_weights, same_chamber

__all__ = [
    "chamber_signature",
    "chow_groups",
    "enumerate_strata",
    "new_weight_datum",
    "parse_weights",
    "poincare_polynomial",
    "same_chamber",
    "verify_presentation",
]
__version__ = "0.1.0"
