"""Class-group torsion of imaginary quadratic fields alongside 2-Selmer groups
and BSD data of elliptic-curve twists."""

from .arith import factorize, fundamental_discriminants_in_range, kronecker_symbol
from .bsd import BsdReport, analytic_sha_rank0, two_part_consistency, verify_bsd
from .descent import SelmerGroup2, SquareClassGroup, descent_setup, sel2_group, sel2_over_K_proxy, torsor_locally_soluble
from .lseries import CentralLValue, CoefficientVector, an_vector, ap, central_value, root_number
from .quadforms import BinaryQuadraticForm, ClassGroupStructure, class_group_structure, compose_forms, reduce_form, torsion_count
from .registry import CurveRegistryEntry, load_registry, resolve_curve
from .weierstrass import (
    LocalData,
    PeriodData,
    WeierstrassCurve,
    minimal_model,
    quadratic_twist,
    real_period,
    tate_local_data,
    torsion_subgroup,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryQuadraticForm",
    "BsdReport",
    "CentralLValue",
    "ClassGroupStructure",
    "CoefficientVector",
    "CurveRegistryEntry",
    "LocalData",
    "PeriodData",
    "SelmerGroup2",
    "SquareClassGroup",
    "WeierstrassCurve",
    "an_vector",
    "analytic_sha_rank0",
    "ap",
    "central_value",
    "class_group_structure",
    "compose_forms",
    "descent_setup",
    "factorize",
    "fundamental_discriminants_in_range",
    "kronecker_symbol",
    "load_registry",
    "minimal_model",
    "quadratic_twist",
    "real_period",
    "reduce_form",
    "resolve_curve",
    "root_number",
    "sel2_group",
    "sel2_over_K_proxy",
    "tate_local_data",
    "torsion_count",
    "torsion_subgroup",
    "torsor_locally_soluble",
    "two_part_consistency",
    "verify_bsd",
]
