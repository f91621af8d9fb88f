"""Graded rings of Hilbert modular forms via restricted Borcherds products."""

from .borcherds import ProductSpec, divisor_of, gamma0_lift, resolve_leading, restrict_product, theta_contract
from .config import load_field
from .groebner import groebner, hilbert_series
from .hilbert_eisenstein import EisensteinSpec, restrict_eisenstein
from .plus_space import PrincipalPart, realize
from .qseries import FracQSeries, eta_product, product_expansion
from .quadfield import QuadField
from .ring import Presentation, load_relations, trivial_char_monomials, verify_relation

__version__ = "0.1.0"

__all__ = [
    "EisensteinSpec",
    "FracQSeries",
    "Presentation",
    "PrincipalPart",
    "ProductSpec",
    "QuadField",
    "divisor_of",
    "eta_product",
    "gamma0_lift",
    "groebner",
    "hilbert_series",
    "load_field",
    "load_relations",
    "product_expansion",
    "realize",
    "resolve_leading",
    "restrict_eisenstein",
    "restrict_product",
    "theta_contract",
    "trivial_char_monomials",
    "verify_relation",
]
