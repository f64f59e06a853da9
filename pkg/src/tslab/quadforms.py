"""Positive definite binary quadratic forms and class groups of imaginary
quadratic fields.

Forms are triples (a, b, c) standing for a x^2 + b x y + c y^2 with
discriminant D = b^2 - 4ac < 0. The class group Cl(D) is realised as the set
of reduced forms under Gauss composition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .arith import factorize, is_fundamental_discriminant


class BinaryQuadraticForm(NamedTuple):
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def opposite(self) -> "BinaryQuadraticForm":
        return reduce_form(BinaryQuadraticForm(self.a, -self.b, self.c))

    def __str__(self):
        return f"({self.a},{self.b},{self.c})"


Form = BinaryQuadraticForm


def principal_form(D: int) -> Form:
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a negative discriminant")
    b = D % 2
    return Form(1, b, (b - D) // 4)


def _reduce(a: int, b: int, c: int) -> Form:
    if not (-a < b <= a):
        r = (a - b) // (2 * a)
        b, c = b + 2 * r * a, a * r * r + b * r + c
    while a > c or (a == c and b < 0):
        a, b, c = c, -b, a
        if not (-a < b <= a):
            r = (a - b) // (2 * a)
            b, c = b + 2 * r * a, a * r * r + b * r + c
    return Form(a, b, c)


def reduce_form(f) -> Form:
    """The unique reduced form properly equivalent to the positive definite f."""
    a, b, c = f
    if b * b - 4 * a * c >= 0:
        raise ValueError(f"form {tuple(f)} is not definite")
    if a <= 0:
        raise ValueError(f"form {tuple(f)} is negative definite")
    return _reduce(a, b, c)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _compose(f1, f2) -> Form:
    # Shanks/Cohen composition of primitive forms of equal discriminant.
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, y2 = _xgcd(s, d)
        y2 = -y2
    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    return _reduce(a3, b3, c3)


def compose_forms(f, g) -> Form:
    """Reduced representative of the Gauss composition of f and g."""
    if f[1] ** 2 - 4 * f[0] * f[2] != g[1] ** 2 - 4 * g[0] * g[2]:
        raise ValueError("forms have different discriminants")
    return _compose(f, g)


def form_power(f, n: int) -> Form:
    D = f[1] ** 2 - 4 * f[0] * f[2]
    if n < 0:
        f, n = Form(f[0], -f[1], f[2]), -n
    result = None
    base = _reduce(*f)
    while n:
        if n & 1:
            result = base if result is None else _compose(result, base)
        n >>= 1
        if n:
            base = _compose(base, base)
    return principal_form(D) if result is None else result


def is_ambiguous(f) -> bool:
    """A reduced form is its own inverse iff b = 0, b = a or a = c."""
    a, b, c = f
    return b == 0 or a == b or a == c


def reduced_forms(D: int) -> list[Form]:
    """Every reduced form of discriminant D < 0, sorted by (a, b)."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a negative discriminant")
    amax = math.isqrt(-D // 3)
    bs = np.arange(D & 1, amax + 1, 2, dtype=np.int64)
    avals = np.arange(1, amax + 1, dtype=np.int64)
    N = (bs * bs - D) // 4
    grid_ok = (N[:, None] % avals[None, :] == 0) & (avals[None, :] >= bs[:, None])
    grid_ok &= avals[None, :] * avals[None, :] <= N[:, None]
    bi, ai = np.nonzero(grid_ok)
    out = []
    for b, a, n in zip(bs[bi].tolist(), avals[ai].tolist(), N[bi].tolist()):
        c = n // a
        out.append(Form(a, b, c))
        if b != 0 and b != a and a != c:
            out.append(Form(a, -b, c))
    out.sort()
    return out


def class_number(D: int) -> int:
    return len(reduced_forms(D))


# -- group structure ---------------------------------------------------------


@dataclass(frozen=True)
class ClassGroupStructure:
    D: int
    h: int
    elementary_divisors: tuple[int, ...]
    generators: tuple[Form, ...]

    def torsion_count(self, m: int) -> int:
        return torsion_count(self, m)

    def as_dict(self) -> dict:
        return {
            "D": self.D,
            "h": self.h,
            "elementary_divisors": list(self.elementary_divisors),
            "generators": [list(g) for g in self.generators],
        }


def _check_D(D: int) -> None:
    if D >= 0:
        raise ValueError(f"D = {D}: only imaginary quadratic fields (D < 0) are supported")
    if not is_fundamental_discriminant(D):
        raise ValueError(f"D = {D} is not a fundamental discriminant")


def _merge_primary(parts: dict[int, list[int]]) -> tuple[int, ...]:
    """Invariant factors d1 | d2 | ... from p-primary exponent lists."""
    k = max((len(e) for e in parts.values()), default=0)
    divisors = [1] * k
    for p, exps in parts.items():
        exps = sorted(exps)
        for i, e in enumerate(exps):
            divisors[k - len(exps) + i] *= p**e
    return tuple(divisors)


def class_group_invariants(D: int, forms: list[Form] | None = None) -> tuple[int, tuple[int, ...]]:
    """Class number and elementary divisors of Cl(D), without generators.

    For each p with p^2 | h the p-part is read off from the counts
    #{x : x^(p^j) = 1}; this avoids building the whole group law.
    """
    if forms is None:
        forms = reduced_forms(D)
    h = len(forms)
    parts: dict[int, list[int]] = {}
    for p, a in factorize(h):
        if a == 1:
            parts[p] = [1]
            continue
        if p == 2:
            n_amb = sum(1 for f in forms if is_ambiguous(f))
            if n_amb == 2**a:
                parts[2] = [1] * a
                continue
        full = p**a
        counts = [1]
        cur = forms
        while counts[-1] < full:
            cur = [form_power(x, p) for x in cur]
            counts.append(sum(1 for x in cur if x[0] == 1))
        ranks = [round(math.log(counts[j] // counts[j - 1], p)) for j in range(1, len(counts))]
        parts[p] = [sum(1 for r in ranks if r >= i) for i in range(1, ranks[0] + 1)]
    return h, _merge_primary(parts)


def smith_normal_form(A: list[list[int]]):
    """Diagonalise the square integer matrix A.

    Returns (diag, V, Vinv) where U A V = diag(diag) for some unimodular U,
    diag is a divisibility chain and Vinv = V^-1. U itself is not needed.
    """
    n = len(A)
    M = [row[:] for row in A]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_add(dst, src, q):  # column dst += q * column src
        for row in M:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        Vi[src] = [x - q * y for x, y in zip(Vi[src], Vi[dst])]

    def col_swap(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_add(dst, src, q):
        M[dst] = [x + q * y for x, y in zip(M[dst], M[src])]

    for t in range(n):
        while True:
            entries = [(abs(M[i][j]), i, j) for i in range(t, n) for j in range(t, n) if M[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            M[t], M[i] = M[i], M[t]
            col_swap(t, j)
            done = True
            for i in range(t + 1, n):
                if M[i][t]:
                    row_add(i, t, -(M[i][t] // M[t][t]))
                    done = done and M[i][t] == 0
            for j in range(t + 1, n):
                if M[t][j]:
                    col_add(j, t, -(M[t][j] // M[t][t]))
                    done = done and M[t][j] == 0
            if not done:
                continue
            bad = next(
                (i for i in range(t + 1, n) for j in range(t + 1, n) if M[i][j] % M[t][t]),
                None,
            )
            if bad is None:
                break
            row_add(t, bad, 1)
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
    return [M[i][i] for i in range(n)], V, Vi


def class_group_structure(D: int) -> ClassGroupStructure:
    """Class group of Q(sqrt(D)) for a negative fundamental D, with
    generators for each cyclic factor."""
    _check_D(D)
    forms = reduced_forms(D)
    h = len(forms)
    one = forms[0]
    # subgroup closure: coords[f] expresses f in the generators added so far
    coords: dict[Form, tuple[int, ...]] = {one: ()}
    gens: list[Form] = []
    relations: list[tuple[int, tuple[int, ...]]] = []
    for f in forms:
        if len(coords) == h:
            break
        if f in coords:
            continue
        k, pw = 1, f
        while pw not in coords:
            pw = _compose(pw, f)
            k += 1
        relations.append((k, coords[pw]))
        grown: dict[Form, tuple[int, ...]] = {}
        fj = one
        for j in range(k):
            for g, c in coords.items():
                grown[_compose(g, fj)] = c + (j,)
            fj = _compose(fj, f)
        coords = {g: c + (0,) * (len(gens) + 1 - len(c)) for g, c in grown.items()}
        gens.append(f)
    r = len(gens)
    R = [[0] * r for _ in range(r)]
    for i, (k, rel) in enumerate(relations):
        R[i][i] = k
        for j, e in enumerate(rel):
            R[i][j] -= e
    diag, _, Vi = smith_normal_form(R)
    divisors, new_gens = [], []
    for i, d in enumerate(diag):
        if d == 1:
            continue
        g = one
        for j, e in enumerate(Vi[i]):
            if e:
                g = _compose(g, form_power(gens[j], e))
        divisors.append(d)
        new_gens.append(g)
    return ClassGroupStructure(D, h, tuple(divisors), tuple(new_gens))


def form_order(f) -> int:
    """Order of the class of f (by stepping; fine at desk scale)."""
    f = _reduce(*f)
    k, pw = 1, f
    while pw[0] != 1:
        pw = _compose(pw, f)
        k += 1
    return k


def torsion_count(G: ClassGroupStructure, m: int) -> int:
    """#Cl(K)[m] = prod gcd(d_i, m)."""
    if m < 2:
        raise ValueError("m must be at least 2")
    out = 1
    for d in G.elementary_divisors:
        out *= math.gcd(d, m)
    return out


def torsion_counts_from_divisors(divisors, ms=(2, 3, 4, 5)) -> dict[int, int]:
    out = {}
    for m in ms:
        t = 1
        for d in divisors:
            t *= math.gcd(d, m)
        out[m] = t
    return out
