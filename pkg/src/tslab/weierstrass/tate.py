"""Tate's algorithm over Z_p: Kodaira symbols, conductor exponents, Tamagawa
numbers, and global minimal models built from it."""

from __future__ import annotations

from dataclasses import dataclass

from ..arith import factorize, prime_divisors, valuation
from .curve import WeierstrassCurve, compose_transforms


class NonMinimalModel(ValueError):
    pass


@dataclass(frozen=True)
class LocalData:
    p: int
    kodaira: str
    f_p: int
    c_p: int
    v_p_delta_min: int
    split: bool | None = None  # only meaningful for multiplicative reduction

    @property
    def reduction(self) -> str:
        if self.f_p == 0:
            return "good"
        if self.f_p == 1:
            return "split" if self.split else "nonsplit"
        return "additive"

    def as_dict(self) -> dict:
        return {"p": self.p, "c_p": self.c_p, "kodaira": self.kodaira}


def _vp(n: int, p: int) -> int:
    return 10**9 if n == 0 else valuation(n, p)


def _quad_has_roots(a: int, b: int, c: int, p: int) -> bool:
    """Whether a T^2 + b T + c (a unit mod p) has a root mod p."""
    if p == 2:
        return any((a * t * t + b * t + c) % 2 == 0 for t in (0, 1))
    disc = (b * b - 4 * a * c) % p
    return disc == 0 or pow(disc, (p - 1) // 2, p) == 1


def _poly_mod(coeffs, p):
    while coeffs and coeffs[-1] % p == 0:
        coeffs = coeffs[:-1]
    return [c % p for c in coeffs]


def _polymulmod(f, g, m, p):
    # f, g, m: little-endian coefficient lists, m monic
    prod = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        for j, y in enumerate(g):
            prod[i + j] = (prod[i + j] + x * y) % p
    dm = len(m) - 1
    for k in range(len(prod) - 1, dm - 1, -1):
        q = prod[k]
        if q:
            for j in range(dm + 1):
                prod[k - dm + j] = (prod[k - dm + j] - q * m[j]) % p
    return _poly_mod(prod[:dm], p)


def _polygcd(f, g, p):
    f, g = _poly_mod(f, p), _poly_mod(g, p)
    while g:
        inv = pow(g[-1], -1, p)
        while len(f) >= len(g):
            q = f[-1] * inv % p
            shift = len(f) - len(g)
            for j, y in enumerate(g):
                f[shift + j] = (f[shift + j] - q * y) % p
            f = _poly_mod(f, p)
            if not f:
                break
        f, g = g, f
    return f


def count_cubic_roots(b: int, c: int, d: int, p: int) -> int:
    """Number of distinct roots of T^3 + bT^2 + cT + d mod p."""
    if p < 100:
        return sum(1 for t in range(p) if (t**3 + b * t * t + c * t + d) % p == 0)
    m = [d % p, c % p, b % p, 1]
    # x^p mod m by square and multiply
    result, base, e = [1], [0, 1], p
    while e:
        if e & 1:
            result = _polymulmod(result, base, m, p)
        e >>= 1
        if e:
            base = _polymulmod(base, base, m, p)
    xp_minus_x = result + [0] * (2 - len(result)) if len(result) < 2 else list(result)
    xp_minus_x[1] = (xp_minus_x[1] - 1) % p
    g = _polygcd(m, xp_minus_x, p)
    return len(g) - 1


def _multiple_root(b: int, c: int, d: int, p: int) -> int:
    """The repeated root mod p of T^3 + bT^2 + cT + d, assumed to exist."""
    if p <= 3:
        for t in range(p):
            if (t**3 + b * t * t + c * t + d) % p == 0 and (3 * t * t + 2 * b * t + c) % p == 0:
                return t
        raise AssertionError("no repeated root")
    x = (3 * c - b * b) % p
    if x:
        r = (b * c - 9 * d) * pow(2 * x, -1, p) % p
    else:
        r = -b * pow(3, -1, p) % p
    assert (r**3 + b * r * r + c * r + d) % p == 0 and (3 * r * r + 2 * b * r + c) % p == 0
    return r


def _singular_point(E: WeierstrassCurve, p: int) -> tuple[int, int]:
    a1, a2, a3, a4, a6 = E.ainvs
    if p <= 3:
        for x in range(p):
            for y in range(p):
                F = y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)
                Fx = a1 * y - (3 * x * x + 2 * a2 * x + a4)
                Fy = 2 * y + a1 * x + a3
                if F % p == 0 and Fx % p == 0 and Fy % p == 0:
                    return x, y
        raise AssertionError("reduction has no singular point")
    b2, b4, b6, _ = E.b_invariants
    inv4 = pow(4, -1, p)
    x0 = _multiple_root(b2 * inv4, b4 * 2 * inv4, b6 * inv4, p)
    y0 = -(a1 * x0 + a3) * pow(2, -1, p) % p
    return x0, y0


def _tate(E: WeierstrassCurve, p: int, allow_scaling: bool):
    """Run Tate's algorithm at p.

    Returns (LocalData, curve, transform) where curve is minimal at p and
    transform takes E to it.  With allow_scaling False a non-minimal model
    raises NonMinimalModel.
    """
    total = (1, 0, 0, 0)
    C = E

    def step(u, r, s, t):
        nonlocal C, total
        C = C.transform(u, r, s, t)
        total = compose_transforms(total, (u, r, s, t))

    while True:
        vD = valuation(C.discriminant, p)
        if vD == 0:
            return LocalData(p, "I0", 0, 1, 0), C, total
        x0, y0 = _singular_point(C, p)
        step(1, x0, 0, y0)
        a1, a2, a3, a4, a6 = C.ainvs
        b2, b4, b6, b8 = C.b_invariants
        p2, p3, p4 = p * p, p**3, p**4
        assert a3 % p == 0 and a4 % p == 0 and a6 % p == 0

        if C.c4 % p:
            split = _quad_has_roots(1, a1, -a2, p)
            if split:
                cp = vD
            else:
                cp = 2 if vD % 2 == 0 else 1
            return LocalData(p, f"I{vD}", 1, cp, vD, split), C, total
        if a6 % p2:
            return LocalData(p, "II", vD, 1, vD), C, total
        if b8 % p3:
            return LocalData(p, "III", vD - 1, 2, vD), C, total
        if b6 % p3:
            cp = 3 if _quad_has_roots(1, a3 // p, -(a6 // p2), p) else 1
            return LocalData(p, "IV", vD - 2, cp, vD), C, total

        # arrange p | a1, a2; p^2 | a3, a4; p^3 | a6
        if p == 2:
            s, t = a2 % 2, 2 * ((a6 // 4) % 2)
        elif p == 3:
            s, t = a1, a3
        else:
            half = pow(2, -1, p)
            s, t = -a1 * half, -a3 * half
        step(1, 0, s, t)
        a1, a2, a3, a4, a6 = C.ainvs
        assert a1 % p == 0 and a2 % p == 0 and a3 % p2 == 0 and a4 % p2 == 0 and a6 % p3 == 0

        b, c, d = a2 // p, a4 // p2, a6 // p3
        w = 27 * d * d - b * b * c * c + 4 * b**3 * d - 18 * b * c * d + 4 * c**3
        x = 3 * c - b * b
        if w % p:
            cp = 1 + count_cubic_roots(b, c, d, p)
            return LocalData(p, "I0*", vD - 4, cp, vD), C, total

        if x % p:
            # one double root: type I_n*
            r = _multiple_root(b, c, d, p)
            step(1, p * r, 0, 0)
            ix = iy = 3
            mx = my = p2
            while True:
                a1, a2, a3, a4, a6 = C.ainvs
                a2t, a3t, a4t, a6t = a2 // p, a3 // my, a4 // (p * mx), a6 // (mx * my)
                if (a3t * a3t + 4 * a6t) % p:
                    cp = 4 if _quad_has_roots(1, a3t, -a6t, p) else 2
                    break
                t = my * a6t if p == 2 else my * (-a3t * pow(2, -1, p) % p)
                step(1, 0, 0, t)
                my *= p
                iy += 1
                a1, a2, a3, a4, a6 = C.ainvs
                a2t, a3t, a4t, a6t = a2 // p, a3 // my, a4 // (p * mx), a6 // (mx * my)
                if (a4t * a4t - 4 * a6t * a2t) % p:
                    cp = 4 if _quad_has_roots(a2t, a4t, a6t, p) else 2
                    break
                r = mx * a6t * a2t if p == 2 else mx * (-a4t * pow(2 * a2t, -1, p) % p)
                step(1, r, 0, 0)
                mx *= p
                ix += 1
            n = ix + iy - 5
            return LocalData(p, f"I{n}*", vD - ix - iy + 1, cp, vD), C, total

        # triple root
        r = _multiple_root(b, c, d, p)
        step(1, p * r, 0, 0)
        a1, a2, a3, a4, a6 = C.ainvs
        a3t, a6t = a3 // p2, a6 // p4
        if (a3t * a3t + 4 * a6t) % p:
            cp = 3 if _quad_has_roots(1, a3t, -a6t, p) else 1
            return LocalData(p, "IV*", vD - 6, cp, vD), C, total
        t = p2 * (a6t % 2) if p == 2 else p2 * (-a3t * pow(2, -1, p) % p)
        step(1, 0, 0, t)
        a1, a2, a3, a4, a6 = C.ainvs
        if a4 % p4:
            return LocalData(p, "III*", vD - 7, 2, vD), C, total
        if a6 % p**6:
            return LocalData(p, "II*", vD - 8, 1, vD), C, total
        if not allow_scaling:
            raise NonMinimalModel(f"model {E} is not minimal at {p}")
        step(p, 0, 0, 0)


def tate_local_data(E: WeierstrassCurve, p: int) -> LocalData:
    """Kodaira symbol, conductor exponent and Tamagawa number of E at p.

    E must be minimal at p.
    """
    return _tate(E, p, allow_scaling=False)[0]


def _normalize(E: WeierstrassCurve):
    s = -(E.a1 // 2)
    E1 = E.transform(1, 0, s, 0)
    r = -((E1.a2 + 1) // 3)
    E2 = E1.transform(1, r, 0, 0)
    t = -(E2.a3 // 2)
    E3 = E2.transform(1, 0, 0, t)
    total = compose_transforms(compose_transforms((1, 0, s, 0), (1, r, 0, 0)), (1, 0, 0, t))
    return E3, total


def minimal_model(E: WeierstrassCurve):
    """Global minimal model of E with reduced a1, a2, a3.

    Returns (curve, (u, r, s, t)); the discriminant drops by u^12.
    """
    total = (1, 0, 0, 0)
    C = E
    for p, e in factorize(E.discriminant):
        if e < 12:
            continue
        _, Cp, tr = _tate(C, p, allow_scaling=True)
        if tr[0] != 1:
            C = Cp
            total = compose_transforms(total, tr)
    C, tr = _normalize(C)
    return C, compose_transforms(total, tr)


def is_minimal(E: WeierstrassCurve) -> bool:
    for p, e in factorize(E.discriminant):
        if e >= 12 and E.c4 % p**4 == 0:
            try:
                _tate(E, p, allow_scaling=False)
            except NonMinimalModel:
                return False
    return True


def bad_primes(E: WeierstrassCurve) -> list[int]:
    return prime_divisors(E.discriminant)


def all_local_data(E: WeierstrassCurve) -> list[LocalData]:
    """Local data at every bad prime of the minimal model E."""
    return [tate_local_data(E, p) for p in bad_primes(E)]


def conductor(E: WeierstrassCurve) -> int:
    N = 1
    for ld in all_local_data(E):
        N *= ld.p**ld.f_p
    return N


def tamagawa_product(E: WeierstrassCurve) -> int:
    out = 1
    for ld in all_local_data(E):
        out *= ld.c_p
    return out
