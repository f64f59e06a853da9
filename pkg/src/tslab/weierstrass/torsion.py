"""Rational torsion via Nagell-Lutz on the integral short model."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from ..arith import factorize
from .curve import WeierstrassCurve


def _integer_roots_monic_cubic(p: int, q: int) -> list[int]:
    """Integer roots of X^3 + pX + q."""
    roots = np.roots([1.0, 0.0, float(p), float(q)])
    out = set()
    for r in roots:
        if abs(r.imag) > 1e-6 * max(1.0, abs(r.real)):
            continue
        x0 = int(round(r.real))
        for x in range(x0 - 2, x0 + 3):
            if x**3 + p * x + q == 0:
                out.add(x)
    return sorted(out)


def _square_divisor_roots(n: int) -> list[int]:
    """All y >= 1 with y^2 | n."""
    choices = [[p**k for k in range(e // 2 + 1)] for p, e in factorize(n)]
    return sorted(math.prod(c) for c in itertools.product(*choices))


def torsion_points(E: WeierstrassCurve) -> list:
    """All rational torsion points of E (None is the identity), sorted."""
    A, B = -27 * E.c4, -54 * E.c6
    short = WeierstrassCurve(0, 0, 0, A, B)
    disc = 4 * A**3 + 27 * B * B
    candidates = []
    for x in _integer_roots_monic_cubic(A, B):
        candidates.append((x, 0))
    for y in _square_divisor_roots(disc):
        for x in _integer_roots_monic_cubic(A, B - y * y):
            candidates += [(x, y), (x, -y)]
    found = [None]
    for P in candidates:
        Q = P
        for _ in range(12):
            if Q is None:
                found.append(P)
                break
            if Fraction(Q[0]).denominator != 1 or Fraction(Q[1]).denominator != 1:
                break
            Q = short.add(Q, P)
    # back to the original model: X = 36x + 3 b2, Y = 108 (2y + a1 x + a3)
    out = [None]
    for P in found[1:]:
        X, Y = P
        x = Fraction(X - 3 * E.b2, 36)
        y = (Fraction(Y, 108) - E.a1 * x - E.a3) / 2
        assert E.is_on_curve((x, y))
        out.append((x, y))
    return [None] + sorted(out[1:])


def torsion_subgroup(E: WeierstrassCurve) -> list[int]:
    """Invariant factors of E(Q)_tors, e.g. [] , [5], [2, 2], [2, 4]."""
    pts = torsion_points(E)
    n = len(pts)
    two_torsion = sum(1 for P in pts[1:] if E.point_order(P, 2) == 2)
    if two_torsion == 3:
        return [2, n // 2]
    return [n] if n > 1 else []


def torsion_order(E: WeierstrassCurve) -> int:
    return len(torsion_points(E))
