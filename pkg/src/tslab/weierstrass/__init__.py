"""Elliptic curves over Q: models, local data, torsion, periods and twists."""

from .curve import WeierstrassCurve, compose_transforms
from .period import PeriodData, real_period
from .tate import (
    LocalData,
    NonMinimalModel,
    all_local_data,
    bad_primes,
    conductor,
    is_minimal,
    minimal_model,
    tamagawa_product,
    tate_local_data,
)
from .torsion import torsion_order, torsion_points, torsion_subgroup


def quadratic_twist(E: WeierstrassCurve, D: int) -> WeierstrassCurve:
    """Minimal model of the twist of E by Q(sqrt(D)).

    Uses y^2 = x^3 - 27 c4 D^2 x - 54 c6 D^3, then minimalises.
    """
    if D == 0:
        raise ValueError("cannot twist by 0")
    tw = WeierstrassCurve(0, 0, 0, -27 * E.c4 * D * D, -54 * E.c6 * D**3)
    return minimal_model(tw)[0]


__all__ = [
    "LocalData",
    "NonMinimalModel",
    "PeriodData",
    "WeierstrassCurve",
    "all_local_data",
    "bad_primes",
    "compose_transforms",
    "conductor",
    "is_minimal",
    "minimal_model",
    "quadratic_twist",
    "real_period",
    "tamagawa_product",
    "tate_local_data",
    "torsion_order",
    "torsion_points",
    "torsion_subgroup",
]
