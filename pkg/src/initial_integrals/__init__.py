"""Universal characterizations of L^p spaces, computed exactly at finite resolution."""

from initial_integrals.dyadic import DyadicStep, juxtapose, p_norm, refine
from initial_integrals.exact import QVec
from initial_integrals.instances import integrate, indefinite_integral, kappa
from initial_integrals.kernels import IMPLEMENTATION
from initial_integrals.universal import (
    AlgebraTarget,
    MorphismTable,
    apply_universal,
    compile_theta,
    make_target,
    verify_morphism,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraTarget",
    "IMPLEMENTATION",
    "DyadicStep",
    "MorphismTable",
    "QVec",
    "apply_universal",
    "compile_theta",
    "indefinite_integral",
    "integrate",
    "juxtapose",
    "kappa",
    "make_target",
    "p_norm",
    "refine",
    "verify_morphism",
]
