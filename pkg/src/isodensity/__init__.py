"""Exact-arithmetic certification of density and isogeny-graph facts.

The package certifies finite, checkable conditions with integer/rational
arithmetic only: Witt-vector digit calculus over the unramified quadratic
extension of Z_p, maximal orders in definite rational quaternion algebras,
a p-adic splitting of such orders, digit-functional density criteria with
replayable JSON certificates, truncated-group Hopf verifications, and
supersingular ell-isogeny graph connectivity.
"""

from .density import certify, verify_certificate
from .fields import FqElement, fq
from .hopf import TruncatedGroup, verify_cocycles, verify_coproduct, verify_s1_relation
from .local import StabilizerElement, Splitting, build_splitting, digits, norm_digits
from .quatalg import (
    MaximalOrder,
    QuaternionAlgebra,
    QuaternionElement,
    SearchExhausted,
    algebra_and_order,
    enumerate_norm_trace,
    find_norm_trace_element,
)
from .ssgraph import (
    IsogenyGraph,
    SupersingularLocus,
    field_split,
    isogeny_graph,
    mass_formula_count,
    supersingular_j,
    verify_kohel,
)
from .witt import WittElement, ZpElement, teichmuller

__version__ = "0.1.0"

__all__ = [
    "FqElement",
    "IsogenyGraph",
    "MaximalOrder",
    "QuaternionAlgebra",
    "QuaternionElement",
    "SearchExhausted",
    "Splitting",
    "StabilizerElement",
    "SupersingularLocus",
    "TruncatedGroup",
    "WittElement",
    "ZpElement",
    "algebra_and_order",
    "build_splitting",
    "certify",
    "digits",
    "enumerate_norm_trace",
    "field_split",
    "find_norm_trace_element",
    "fq",
    "isogeny_graph",
    "mass_formula_count",
    "norm_digits",
    "supersingular_j",
    "teichmuller",
    "verify_certificate",
    "verify_cocycles",
    "verify_coproduct",
    "verify_kohel",
    "verify_s1_relation",
]
