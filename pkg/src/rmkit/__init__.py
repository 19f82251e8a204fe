"""Exact computations around real multiplication, continued fractions and congruence subgroups."""

__version__ = "0.1.0"

from .contfrac import ContinuedFraction, cf_expand, convergents, gl2_equivalent, stabilizer_matrix
from .errors import RationalValue, RMKitError
from .functor import functor_on_class, teichmuller_map
from .lattices import PseudoLattice, QuadraticOrder, endomorphism_order, order_omega
from .matrix import Matrix2Z
from .modgroup import fixed_points, lemma1_harness, verify_lemma4
from .quadnum import QuadraticIrrational, canonicalize, mobius_apply, parse_quadratic

__all__ = [
    "ContinuedFraction",
    "Matrix2Z",
    "PseudoLattice",
    "QuadraticIrrational",
    "QuadraticOrder",
    "RMKitError",
    "RationalValue",
    "canonicalize",
    "cf_expand",
    "convergents",
    "endomorphism_order",
    "fixed_points",
    "functor_on_class",
    "gl2_equivalent",
    "lemma1_harness",
    "mobius_apply",
    "order_omega",
    "parse_quadratic",
    "stabilizer_matrix",
    "teichmuller_map",
    "verify_lemma4",
]
