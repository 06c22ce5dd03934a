"""Exact membership tests, certificates and decompositions for cones of binary forms."""
from .forms import Form, FormError, binary_form, compose, inner_product, parse_rational, power_form
from .realroots import PsdStatus, PsdTag, binary_psd_status, q_membership, sym_psd_status
from .tower import TowerScalar, tower_sign, tower_sqrt
from .verdicts import BOUNDARY, INTERIOR, OUTSIDE, UNKNOWN, Decision, MembershipVerdict

__all__ = [
    "Form", "FormError", "binary_form", "compose", "inner_product", "parse_rational", "power_form",
    "PsdStatus", "PsdTag", "binary_psd_status", "q_membership", "sym_psd_status",
    "TowerScalar", "tower_sign", "tower_sqrt",
    "BOUNDARY", "INTERIOR", "OUTSIDE", "UNKNOWN", "Decision", "MembershipVerdict",
]
__version__ = "0.1.0"
