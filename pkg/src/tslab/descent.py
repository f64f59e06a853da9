"""Complete 2-descent over Q for curves with full rational 2-torsion.

A curve is put in the form y^2 = (x - e1)(x - e2)(x - e3) with integer
e1 < e2 < e3, and a class in E(Q)/2E(Q) is recorded as the pair of square
classes (x - e1, x - e2).  Locally the image of E(Q_v)/2E(Q_v) is computed
exactly by walking a tree of p-adic balls on the x-line: on a small enough
ball each x - e_i has constant square class, so the leaves give the image
without any sampling.  The Selmer group is then an F2-kernel.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import prime_divisors, squarefree_part, valuation
from .weierstrass import WeierstrassCurve, quadratic_twist, torsion_points

REAL = "inf"
SEARCH_BOUND = 100  # |s|, t <= 100 on the torsor, i.e. x-denominators up to 10^4


# -- F2 linear algebra on 0/1 numpy arrays --------------------------------------


def _rref_f2(M: np.ndarray):
    M = (np.array(M, dtype=np.uint8) & 1).copy()
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        hits = np.nonzero(M[r:, c])[0]
        if len(hits) == 0:
            continue
        k = r + hits[0]
        M[[r, k]] = M[[k, r]]
        others = np.nonzero(M[:, c])[0]
        for i in others:
            if i != r:
                M[i] ^= M[r]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M[:r], pivots


def rank_f2(M) -> int:
    M = np.atleast_2d(np.asarray(M, dtype=np.uint8))
    if M.size == 0:
        return 0
    return len(_rref_f2(M)[1])


def nullspace_f2(M, ncols: int) -> np.ndarray:
    """Basis (as rows) of {x in F2^ncols : M x = 0}."""
    M = np.asarray(M, dtype=np.uint8).reshape(-1, ncols)
    R, pivots = _rref_f2(M) if len(M) else (M, [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = np.zeros(ncols, dtype=np.uint8)
        x[f] = 1
        for row, pc in zip(R, pivots):
            x[pc] = row[f]
        basis.append(x)
    return np.array(basis, dtype=np.uint8).reshape(len(basis), ncols)


# -- square classes ----------------------------------------------------------------


def square_class(q, p) -> tuple[int, ...]:
    """Class of the nonzero rational q in Q_p*/Q_p*^2 as an F2 vector.

    p = "inf" gives (sign,); odd p gives (v mod 2, non-residue bit); p = 2
    gives (v mod 2, [u = 3,7 mod 8], [u = 3,5 mod 8]) for the unit part u.
    """
    q = Fraction(q)
    if q == 0:
        raise ValueError("0 has no square class")
    if p == REAL:
        return (int(q < 0),)
    num, den = q.numerator, q.denominator
    v = valuation(num, p) - valuation(den, p)
    u_num, u_den = num // p ** valuation(num, p), den // p ** valuation(den, p)
    if p == 2:
        u = u_num * u_den % 8  # u_den is its own inverse mod 8
        return (v & 1, int(u in (3, 7)), int(u in (3, 5)))
    u = u_num * u_den % p
    return (v & 1, int(pow(u, (p - 1) // 2, p) != 1))


def local_dimension(p) -> int:
    return 1 if p == REAL else (3 if p == 2 else 2)


@dataclass(frozen=True)
class SquareClassGroup:
    """Square classes of Q supported on {-1} and the primes S."""

    S: tuple[int, ...]

    @property
    def basis(self) -> tuple[int, ...]:
        return (-1,) + self.S

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def vector(self, q) -> np.ndarray:
        """Coordinates of the class of q; q must be supported on the basis."""
        d = squarefree_part(Fraction(q).numerator * Fraction(q).denominator)
        x = np.zeros(self.dimension, dtype=np.uint8)
        if d < 0:
            x[0] = 1
            d = -d
        for i, p in enumerate(self.S):
            if d % p == 0:
                x[i + 1] = 1
                d //= p
        if d != 1:
            raise ValueError(f"{q} is not supported on {self.basis}")
        return x

    def element(self, x) -> int:
        return math.prod(b for b, bit in zip(self.basis, x) if bit)

    def elements(self):
        for bits in itertools.product((0, 1), repeat=self.dimension):
            yield self.element(bits)


# -- setup ----------------------------------------------------------------------


def descent_model(E: WeierstrassCurve) -> WeierstrassCurve:
    """An integral model y^2 = x^3 + A x^2 + B x + C isomorphic to E."""
    if E.a1 == 0 and E.a3 == 0:
        return WeierstrassCurve(0, E.a2, 0, E.a4, E.a6)
    return WeierstrassCurve(0, E.b2, 0, 8 * E.b4, 16 * E.b6)


def _integer_roots(A: int, B: int, C: int) -> list[int]:
    """Integer roots of x^3 + A x^2 + B x + C, with multiplicity."""
    out = []
    for r in np.roots([1.0, float(A), float(B), float(C)]):
        if abs(r.imag) > 1e-6 * max(1.0, abs(r.real)):
            continue
        x0 = int(round(r.real))
        for x in range(x0 - 2, x0 + 3):
            if x**3 + A * x * x + B * x + C == 0 and x not in out:
                out.append(x)
    return sorted(out)


def descent_setup(E: WeierstrassCurve):
    """Integer roots e1 < e2 < e3 of the 2-division cubic, and the square-class
    group on {-1} and the primes dividing 2*Delta."""
    M = descent_model(E)
    roots = _integer_roots(M.a2, M.a4, M.a6)
    if len(roots) != 3:
        raise ValueError(f"curve {list(E.ainvs)} does not have full rational 2-torsion")
    return tuple(roots), SquareClassGroup(_bad_set(roots))


def _bad_set(roots) -> tuple[int, ...]:
    e1, e2, e3 = roots
    return tuple(prime_divisors(2 * (e1 - e2) * (e1 - e3) * (e2 - e3)))


def descent_image(roots, x, y=None) -> tuple[Fraction, Fraction]:
    """Pair (x - e1, x - e2) for a point with abscissa x, with the usual
    substitutes at the 2-torsion points."""
    e1, e2, e3 = roots
    x = Fraction(x)
    if x == e1:
        return Fraction((e1 - e2) * (e1 - e3)), Fraction(e1 - e2)
    if x == e2:
        return Fraction(e2 - e1), Fraction((e2 - e1) * (e2 - e3))
    return x - e1, x - e2


# -- local images -----------------------------------------------------------------


def _add(u, v):
    return tuple(a ^ b for a, b in zip(u, v))


def _vp(n: int, p: int) -> int:
    return 10**9 if n == 0 else valuation(n, p)


def _real_image(roots):
    e1, e2, e3 = roots
    out = set()
    for x in (e1, e2, e3, e3 + 1, Fraction(e1 + e2, 2)):
        if x in (e1, e2, e3):
            c1, c2 = descent_image(roots, x)
            out.add((square_class(c1, REAL), square_class(c2, REAL)))
            continue
        cl = [square_class(x - e, REAL) for e in roots]
        if _add(_add(cl[0], cl[1]), cl[2]) == (0,):
            out.add((cl[0], cl[1]))
    return out


def _padic_image(roots, p):
    slack = 2 if p == 2 else 0
    out = set()

    def record(c1, c2, c3):
        if _add(_add(c1, c2), c3) == (0,) * len(c1):
            out.add((c1, c2))

    # non-integral x: x = u / p^j
    if p == 2:
        for j in (1, 2, 3, 4):
            for u in (1, 3, 5, 7):
                x = Fraction(u, 2**j)
                record(*(square_class(x - e, 2) for e in roots))
    else:
        zero = (0, 0)
        out.add((zero, zero))

    # integral x: balls x0 + p^k Z_p
    stack = [(0, 0)]
    while stack:
        x0, k = stack.pop()
        vals = [_vp(x0 - e, p) for e in roots]
        undetermined = [i for i, v in enumerate(vals) if v > k - 1 - slack]
        if not undetermined:
            record(*(square_class(x0 - e, p) for e in roots))
            continue
        if len(undetermined) == 1:
            i = undetermined[0]
            if (x0 - roots[i]) % p**k == 0:
                # the ball holds e_i; x - e_i takes every class in it
                cl = [square_class(x0 - e, p) if j != i else None for j, e in enumerate(roots)]
                a, b = [c for c in cl if c is not None]
                cl[i] = _add(a, b)
                record(*cl)
                continue
        step = p**k
        stack.extend((x0 + a * step, k + 1) for a in range(p))
    return out


@lru_cache(maxsize=4096)
def local_image(roots: tuple[int, int, int], p) -> frozenset:
    """Image of E(Q_p)/2E(Q_p) as a set of pairs of local square classes."""
    img = _real_image(roots) if p == REAL else _padic_image(roots, p)
    expected = 2 ** local_dimension(p)
    if len(img) != expected:
        raise AssertionError(f"local image at {p} has {len(img)} elements, expected {expected}")
    return frozenset(img)


def torsor_locally_soluble(roots, d1, d2, p) -> bool:
    """Whether d1 z1^2 = x - e1, d2 z2^2 = x - e2, d1 d2 z3^2 = x - e3 has a
    point over Q_p (p = "inf" for the reals)."""
    roots = tuple(sorted(roots))
    pair = (square_class(d1, p), square_class(d2, p))
    return pair in local_image(roots, p)


# -- Selmer group -------------------------------------------------------------------


@dataclass(frozen=True)
class SelmerGroup2:
    curve: WeierstrassCurve
    dimension: int
    basis_pairs: tuple[tuple[int, int], ...]
    torsion_image_dim: int
    roots: tuple[int, int, int] = ()
    group: SquareClassGroup | None = None
    points: tuple = field(default=(), repr=False)  # (x, y) on the descent model
    rank_lower_bound: int = 0

    @property
    def size(self) -> int:
        return 2**self.dimension

    def as_dict(self) -> dict:
        return {
            "curve": list(self.curve.ainvs),
            "roots": list(self.roots),
            "S": list(self.group.S) if self.group else [],
            "dimension": self.dimension,
            "basis_pairs": [list(b) for b in self.basis_pairs],
            "torsion_image_dim": self.torsion_image_dim,
            "rank_lower_bound": self.rank_lower_bound,
            "points": [[str(x), str(y)] for x, y in self.points],
        }


def _local_matrix(G: SquareClassGroup, p) -> np.ndarray:
    """Matrix of G^2 -> (Q_p*/Q_p*^2)^2."""
    cols = [square_class(b, p) for b in G.basis]
    m, n = local_dimension(p), G.dimension
    L = np.zeros((2 * m, 2 * n), dtype=np.uint8)
    for j, c in enumerate(cols):
        L[:m, j] = c
        L[m:, n + j] = c
    return L


def selmer_space(roots, S=None) -> tuple[SquareClassGroup, np.ndarray]:
    """Basis (rows, in G^2 coordinates) of the 2-Selmer group for the given
    roots, taken in any order."""
    roots = tuple(sorted(roots))
    G = SquareClassGroup(tuple(S) if S is not None else _bad_set(roots))
    n = 2 * G.dimension
    constraints = []
    for p in (REAL,) + G.S:
        img = local_image(roots, p)
        W = np.array([list(a) + list(b) for a, b in img], dtype=np.uint8)
        ann = nullspace_f2(W, W.shape[1])
        if len(ann):
            constraints.append(ann.astype(np.int64) @ _local_matrix(G, p).astype(np.int64) % 2)
    C = np.vstack(constraints) if constraints else np.zeros((0, n), dtype=np.uint8)
    return G, nullspace_f2(C, n)


def _pair_vector(G, pair) -> np.ndarray:
    return np.concatenate([G.vector(pair[0]), G.vector(pair[1])])


def _in_span(basis, v) -> bool:
    if len(basis) == 0:
        return not v.any()
    return rank_f2(np.vstack([basis, v])) == rank_f2(basis)


def _search_torsor(roots, d1, d2, bound):
    """A point with x = e1 + d1 (s/t)^2 on the torsor for (d1, d2), if one
    with |s|, t <= bound exists."""
    e1, e2, e3 = roots
    s = np.arange(1, bound + 1, dtype=np.int64)
    for t in range(1, bound + 1):
        s_ok = s[np.gcd(s, t) == 1]
        q2 = d1 * s_ok * s_ok + (e1 - e2) * t * t  # must be d2 * square
        q3 = d1 * s_ok * s_ok + (e1 - e3) * t * t  # must be d1 d2 * square
        ok = (q2 % d2 == 0) & ((q2 // d2) >= 0) & (q3 % (d1 * d2) == 0) & ((q3 // (d1 * d2)) >= 0)
        for si in s_ok[ok]:
            si = int(si)
            a = (d1 * si * si + (e1 - e2) * t * t) // d2
            b = (d1 * si * si + (e1 - e3) * t * t) // (d1 * d2)
            ra, rb = math.isqrt(a), math.isqrt(b)
            if ra * ra == a and rb * rb == b:
                x = e1 + Fraction(d1 * si * si, t * t)
                y = Fraction(d1 * d2 * si * ra * rb, t**3)
                assert y * y == (x - e1) * (x - e2) * (x - e3)
                return x, y
    return None


def sel2_group(E: WeierstrassCurve, search_bound: int = SEARCH_BOUND) -> SelmerGroup2:
    """2-Selmer group of E together with torsion images and searched points."""
    roots, G = descent_setup(E)
    G, basis = selmer_space(roots, G.S)
    M = descent_model(E)

    tors = np.zeros((0, 2 * G.dimension), dtype=np.uint8)
    for P in torsion_points(M)[1:]:
        v = _pair_vector(G, descent_image(roots, P[0]))
        if not _in_span(tors, v):
            tors = np.vstack([tors, v])
    torsion_dim = len(tors)

    # search the torsors of Selmer classes outside the known image
    known, points = tors, []
    for bits in itertools.product((0, 1), repeat=len(basis)):
        v = np.array(bits, dtype=np.int64) @ basis.astype(np.int64) % 2 if len(basis) else None
        if v is None or _in_span(known, v.astype(np.uint8)):
            continue
        d1 = G.element(v[: G.dimension])
        d2 = G.element(v[G.dimension :])
        P = _search_torsor(roots, d1, d2, search_bound)
        if P is not None:
            points.append(P)
            known = np.vstack([known, v.astype(np.uint8)])
    for v in known:
        if not _in_span(basis, v):
            raise AssertionError("image of a rational point fell outside the Selmer group")

    reduced, _ = _rref_f2(basis) if len(basis) else (basis, [])
    pairs = tuple(
        (G.element(row[: G.dimension]), G.element(row[G.dimension :])) for row in reduced
    )
    return SelmerGroup2(
        curve=E,
        dimension=len(basis),
        basis_pairs=pairs,
        torsion_image_dim=torsion_dim,
        roots=roots,
        group=G,
        points=tuple(points),
        rank_lower_bound=len(known) - torsion_dim,
    )


def sel2_over_K_proxy(E: WeierstrassCurve, D: int, search_bound: int = SEARCH_BOUND) -> tuple[int, dict]:
    """dim Sel2(E/Q) + dim Sel2(E_D/Q), standing in for dim Sel2(E/Q(sqrt D))."""
    sel_E = sel2_group(E, search_bound)
    sel_D = sel2_group(quadratic_twist(E, D), search_bound)
    flagged = math.gcd(D, 2 * E.discriminant) != 1
    proxy = sel_E.dimension + sel_D.dimension
    return proxy, {
        "sel2_E": sel_E.dimension,
        "sel2_ED": sel_D.dimension,
        "proxy": proxy,
        "rank_lower_bound_ED": sel_D.rank_lower_bound,
        "flagged": flagged,
    }
