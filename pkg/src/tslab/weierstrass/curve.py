"""Integral Weierstrass models over Q, coordinate changes and the group law."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with integer a_i."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            if not isinstance(getattr(self, name), int):
                raise TypeError(f"{name} must be an integer")
        if self.discriminant == 0:
            raise ValueError(f"singular curve {self.ainvs}")

    @classmethod
    def from_list(cls, coeffs) -> "WeierstrassCurve":
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) == 2:
            coeffs = [0, 0, 0] + coeffs
        if len(coeffs) != 5:
            raise ValueError("expected five coefficients a1,a2,a3,a4,a6")
        return cls(*coeffs)

    @classmethod
    def parse(cls, text: str) -> "WeierstrassCurve":
        """Parse 'a1,a2,a3,a4,a6' (brackets optional)."""
        body = text.strip().strip("[]() ")
        try:
            return cls.from_list(int(t) for t in body.split(","))
        except ValueError as exc:
            raise ValueError(f"bad curve coefficients {text!r}: {exc}") from None

    @classmethod
    def from_c4c6(cls, c4: int, c6: int) -> "WeierstrassCurve":
        """The integral model y^2 = x^3 - 27 c4 x - 54 c6."""
        return cls(0, 0, 0, -27 * c4, -54 * c6)

    @property
    def ainvs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def __str__(self):
        return "[" + ",".join(str(a) for a in self.ainvs) + "]"

    @cached_property
    def b_invariants(self) -> tuple[int, int, int, int]:
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def b2(self):
        return self.b_invariants[0]

    @property
    def b4(self):
        return self.b_invariants[1]

    @property
    def b6(self):
        return self.b_invariants[2]

    @property
    def b8(self):
        return self.b_invariants[3]

    @cached_property
    def c4(self) -> int:
        b2, b4, _, _ = self.b_invariants
        return b2 * b2 - 24 * b4

    @cached_property
    def c6(self) -> int:
        b2, b4, b6, _ = self.b_invariants
        return -(b2**3) + 36 * b2 * b4 - 216 * b6

    @cached_property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def transform(self, u, r, s, t) -> "WeierstrassCurve":
        """Model obtained by x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.

        Raises ValueError if the result is not integral.
        """
        a1, a2, a3, a4, a6 = self.ainvs
        n1 = a1 + 2 * s
        n2 = a2 - s * a1 + 3 * r - s * s
        n3 = a3 + r * a1 + 2 * t
        n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
        n6 = a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1
        out = []
        for n, k in ((n1, 1), (n2, 2), (n3, 3), (n4, 4), (n6, 6)):
            q = Fraction(n) / Fraction(u) ** k
            if q.denominator != 1:
                raise ValueError("transformation does not give an integral model")
            out.append(int(q))
        return WeierstrassCurve(*out)

    # -- rational points -----------------------------------------------------

    def is_on_curve(self, P) -> bool:
        if P is None:
            return True
        x, y = P
        a1, a2, a3, a4, a6 = self.ainvs
        return y * y + a1 * x * y + a3 * y == x**3 + a2 * x * x + a4 * x + a6

    def negate(self, P):
        if P is None:
            return None
        x, y = P
        return (x, -y - self.a1 * x - self.a3)

    def add(self, P, Q):
        """Group law on points given as (x, y) with Fraction/int entries;
        None is the point at infinity."""
        if P is None:
            return Q
        if Q is None:
            return P
        a1, a2, a3, a4, a6 = self.ainvs
        x1, y1 = Fraction(P[0]), Fraction(P[1])
        x2, y2 = Fraction(Q[0]), Fraction(Q[1])
        if x1 == x2:
            if y1 + y2 + a1 * x2 + a3 == 0:
                return None
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
        else:
            lam = (y2 - y1) / (x2 - x1)
        nu = y1 - lam * x1
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return (x3, y3)

    def multiply(self, P, n: int):
        if n < 0:
            return self.multiply(self.negate(P), -n)
        result, base = None, P
        while n:
            if n & 1:
                result = self.add(result, base)
            n >>= 1
            if n:
                base = self.add(base, base)
        return result

    def point_order(self, P, bound: int = 12):
        """Order of P if it is at most bound, else None."""
        Q = P
        for n in range(1, bound + 1):
            if Q is None:
                return n
            Q = self.add(Q, P)
        return None


def compose_transforms(first, second):
    """(u, r, s, t) of applying first and then second."""
    u1, r1, s1, t1 = first
    u2, r2, s2, t2 = second
    return (
        u1 * u2,
        r1 + u1 * u1 * r2,
        s1 + u1 * s2,
        t1 + u1 * u1 * s1 * r2 + u1**3 * t2,
    )
