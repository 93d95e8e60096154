"""Heckman-Opdam analysis on compact alcoves.

Jacobi polynomials for the root systems of rank one and two, the heat kernel
and heat semigroup they diagonalize, and the holomorphic heat transform onto
its reproducing-kernel space.
"""

from .bargmann import HolomorphicHeatFunction, holo_heat_transform, ht_inner_product, reproducing_kernel
from .cherednik import CherednikOperator, apply_cherednik, apply_laplacian, apply_Lm
from .estimators import HeatSemigroup, HeckmanOpdamTransform, SegalBargmannTransform
from .heat import HeatKernelEvaluator, heat_transform, kernel_eval
from .innerprod import InnerProduct, QuadratureGrid, SampledFunction, inner_product
from .jacobi import JacobiBasis, build_basis, c_function, norm_formula
from .rootsys import RootSystem, build_root_system
from .trigpoly import TrigPoly, monomial, orbit_sum

__version__ = "0.1.0"

__all__ = [
    "CherednikOperator",
    "HeatKernelEvaluator",
    "HeatSemigroup",
    "HeckmanOpdamTransform",
    "HolomorphicHeatFunction",
    "InnerProduct",
    "JacobiBasis",
    "QuadratureGrid",
    "RootSystem",
    "SampledFunction",
    "SegalBargmannTransform",
    "TrigPoly",
    "apply_Lm",
    "apply_cherednik",
    "apply_laplacian",
    "build_basis",
    "build_root_system",
    "c_function",
    "heat_transform",
    "holo_heat_transform",
    "ht_inner_product",
    "inner_product",
    "kernel_eval",
    "monomial",
    "norm_formula",
    "orbit_sum",
    "reproducing_kernel",
]
