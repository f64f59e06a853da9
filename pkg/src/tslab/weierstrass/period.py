"""Real and imaginary periods of the Neron differential via the AGM."""

from __future__ import annotations

import sys
from dataclasses import dataclass

import mpmath

from .curve import WeierstrassCurve


@dataclass(frozen=True)
class PeriodData:
    omega_plus: float  # integral over the identity component of E(R)
    omega_minus: float
    components: int  # number of connected components of E(R)
    precision: float

    @property
    def omega_used(self) -> float:
        """Real period as it enters the BSD formula: doubled when E(R) has
        two components."""
        return self.components * self.omega_plus


def real_period(E: WeierstrassCurve, precision: float = 1e-12) -> PeriodData:
    """Periods of dx/(2y + a1 x + a3) on the model E.

    Computed with mpmath at a working precision comfortably beyond the target.
    """
    if precision < sys.float_info.epsilon:
        raise ValueError("period precision target below double-precision resolution")
    dps = max(30, int(-mpmath.log10(precision)) + 15)
    with mpmath.workdps(dps):
        b2, b4, b6, _ = E.b_invariants
        roots = mpmath.polyroots([4, b2, 2 * b4, b6], maxsteps=200, extraprec=4 * dps)
        if E.discriminant > 0:
            e3, e2, e1 = sorted(mpmath.re(r) for r in roots)
            wp = mpmath.pi / mpmath.agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e1 - e2))
            wm = mpmath.pi / mpmath.agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e2 - e3))
            comps = 2
        else:
            e1 = min(roots, key=lambda r: abs(mpmath.im(r)))
            e2 = max(roots, key=lambda r: mpmath.im(r))
            e1 = mpmath.re(e1)
            s = mpmath.sqrt(e1 - e2)
            wp = mpmath.pi / mpmath.agm(mpmath.re(s), abs(s))
            wm = mpmath.pi / (2 * mpmath.agm(abs(s), abs(mpmath.im(s))))
            comps = 1
        return PeriodData(float(wp), float(wm), comps, precision)
