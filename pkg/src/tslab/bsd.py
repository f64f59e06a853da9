"""Birch and Swinnerton-Dyer bookkeeping for quadratic twists.

For a rank-0 twist every term of the leading-coefficient formula except #Sha
is computed directly, and Sha is solved for.  Everything reported here is
conditional on BSD: an integral square value is evidence of a consistent
pipeline, not a proof of anything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .descent import SelmerGroup2, descent_setup, sel2_group
from .lseries import DECISION_TOLERANCE, VALUE_TARGET, CentralLValue, central_value
from .weierstrass import (
    LocalData,
    PeriodData,
    WeierstrassCurve,
    all_local_data,
    minimal_model,
    quadratic_twist,
    real_period,
    torsion_order,
)

ROUNDING_TOLERANCE = 1e-4
CONDITIONAL_NOTE = "conditional on BSD: Sha is the value forced by the leading-term formula"


@dataclass(frozen=True)
class BsdReport:
    curve: str
    D: int
    twist: WeierstrassCurve
    rank_status: str  # "0", "1" or "undetermined"
    L_term: CentralLValue
    omega: PeriodData
    local_data: tuple[LocalData, ...]
    tamagawa_product: int
    torsion_order: int
    regulator: float | None
    sha_analytic: float | None
    sha_rounded: int | None
    sel2_dim: int | None = None
    two_part_descent: int | None = None  # dim Sel2 - torsion image dim
    checks: dict = field(default_factory=dict)

    @property
    def finite_terms_ratio(self) -> float:
        """Omega_used * prod c_p / #tors^2."""
        return self.omega.omega_used * self.tamagawa_product / self.torsion_order**2

    def as_dict(self) -> dict:
        return {
            "curve": self.curve,
            "D": self.D,
            "twist": list(self.twist.ainvs),
            "rank_status": self.rank_status,
            "L": self.L_term.as_dict(),
            "omega": {
                "omega_plus": self.omega.omega_plus,
                "omega_minus": self.omega.omega_minus,
                "components": self.omega.components,
                "omega_used": self.omega.omega_used,
            },
            "tamagawa": [ld.as_dict() for ld in self.local_data],
            "tamagawa_product": self.tamagawa_product,
            "torsion": self.torsion_order,
            "regulator": self.regulator,
            "sha_analytic": self.sha_analytic,
            "sha_rounded": self.sha_rounded,
            "sel2_dim": self.sel2_dim,
            "checks": dict(self.checks),
            "note": CONDITIONAL_NOTE,
        }


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def round_sha(value: float, tol: float = ROUNDING_TOLERANCE) -> int | None:
    """Nearest integer if it is within tol and a positive perfect square."""
    k = round(value)
    if k >= 1 and abs(value - k) < tol and _is_square(k):
        return int(k)
    return None


def sha_from_terms(L: float, omega_used: float, tamagawa: int, torsion: int, regulator: float = 1.0) -> float:
    return L * torsion**2 / (omega_used * tamagawa * regulator)


def analytic_sha_rank0(
    E_twist: WeierstrassCurve,
    curve: str = "",
    D: int = 1,
    target: float = VALUE_TARGET,
    n_max: int | None = None,
    period_precision: float = 1e-12,
) -> BsdReport:
    """Terms of the BSD formula for E_twist and, at rank 0, analytic Sha.

    A vanishing L(E,1) or a root number -1 escalates rank_status and no Sha
    is claimed.
    """
    E = minimal_model(E_twist)[0]
    L = central_value(E, target=target, n_max=n_max)
    omega = real_period(E, period_precision)
    local = tuple(all_local_data(E))
    cprod = math.prod(ld.c_p for ld in local)
    tors = torsion_order(E)
    status = L.rank_status
    sha = rounded = reg = None
    if status == "0":
        reg = 1.0
        sha = sha_from_terms(L.value, omega.omega_used, cprod, tors, reg)
        rounded = round_sha(sha)
    checks = {"square": rounded is not None if status == "0" else None, "fe_residual": L.fe_residual}
    return BsdReport(curve, D, E, status, L, omega, local, cprod, tors, reg, sha, rounded, checks=checks)


def two_part_consistency(report: BsdReport, sel: SelmerGroup2) -> tuple[bool | None, str]:
    """ord_2 Sha = dim Sel2 - dim E(Q)[2] at rank 0.

    Returns (None, reason) when the check does not apply.
    """
    if report.rank_status != "0":
        return None, f"skipped: rank status {report.rank_status}"
    if report.sha_rounded is None:
        return False, f"analytic Sha {report.sha_analytic!r} is not an integral square"
    ord2 = (report.sha_rounded & -report.sha_rounded).bit_length() - 1
    two_torsion_dim = 2  # full rational 2-torsion is a precondition of the descent
    expected = sel.dimension - two_torsion_dim
    ok = ord2 == expected
    return ok, f"ord2(Sha)={ord2}, dim Sel2 - dim E[2] = {sel.dimension} - 2 = {expected}"


def _has_full_two_torsion(E: WeierstrassCurve) -> bool:
    try:
        descent_setup(E)
    except ValueError:
        return False
    return True


def verify_bsd(E: WeierstrassCurve, D: int, curve: str = "", target: float = VALUE_TARGET) -> BsdReport:
    """Full report for the twist of E by D, including the 2-part check when
    the twist has full rational 2-torsion."""
    twist = quadratic_twist(E, D) if D != 1 else minimal_model(E)[0]
    report = analytic_sha_rank0(twist, curve=curve, D=D, target=target)
    checks = dict(report.checks)
    sel_dim = two_part = None
    if _has_full_two_torsion(twist):
        sel = sel2_group(twist)
        sel_dim = sel.dimension
        two_part = sel.dimension - sel.torsion_image_dim
        ok, detail = two_part_consistency(report, sel)
        checks["two_part"] = ok
        checks["two_part_detail"] = detail
        if report.rank_status != "0":
            checks["sel2_rank_bound"] = sel.dimension - sel.torsion_image_dim
            checks["point_rank_lower_bound"] = sel.rank_lower_bound
    else:
        checks["two_part"] = None
        checks["two_part_detail"] = "skipped: no full rational 2-torsion"
    return replace(report, sel2_dim=sel_dim, two_part_descent=two_part, checks=checks)


def report_passes(report: BsdReport) -> bool:
    """All applicable consistency checks hold."""
    c = report.checks
    if c.get("fe_residual", 1.0) >= DECISION_TOLERANCE:
        return False
    return c.get("square") is not False and c.get("two_part") is not False
