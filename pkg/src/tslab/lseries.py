"""Dirichlet coefficients, root numbers and central L-values of elliptic
curves over Q.

The analytic side relies on the weight-2 theta identity

    F(1/t) = w t^2 F(t),   F(t) = sum_n a_n exp(-2 pi n t / sqrt(N)),

which is used both to decide the root number w and to check the conductor
and the coefficients end to end.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np
from scipy.special import exp1

from .arith import primes_up_to
from .weierstrass import WeierstrassCurve, all_local_data

NAIVE_COUNT_LIMIT = 10_000
MESTRE_BOUND = 229
VALUE_TARGET = 1e-8
DECISION_TOLERANCE = 1e-6
N_MAX_CAP = 5_000_000
FE_TEST_POINTS = (1.2, 1.4)


class PrecisionError(RuntimeError):
    pass


class RootNumberError(RuntimeError):
    pass


# -- point counting ------------------------------------------------------------


def ap_naive(E: WeierstrassCurve, p: int) -> int:
    """p + 1 - #E(F_p) by counting (E with good reduction at p)."""
    if p == 2:
        a1, a2, a3, a4, a6 = E.ainvs
        n = 1 + sum(
            1
            for x in (0, 1)
            for y in (0, 1)
            if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % 2 == 0
        )
        return p + 1 - n
    b2, b4, b6, _ = E.b_invariants
    xs = np.arange(p, dtype=np.int64)
    x2 = xs * xs % p
    g = (4 * (x2 * xs % p) + (b2 % p) * x2 + ((2 * b4) % p) * xs + b6 % p) % p
    is_sq = np.zeros(p, dtype=np.int64)
    is_sq[x2] = 1
    chi = 2 * is_sq - 1
    chi[0] = 0
    return int(-chi[g].sum())


def _ec_add(P, Q, A, p):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + A) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return (x3, (lam * (x1 - x3) - y1) % p)


def _ec_mul(P, n, A, p):
    if n < 0:
        P, n = (P[0], -P[1] % p), -n
    R = None
    while n:
        if n & 1:
            R = _ec_add(R, P, A, p)
        n >>= 1
        if n:
            P = _ec_add(P, P, A, p)
    return R


def _sqrt_mod(a, p):
    """A square root of a mod the odd prime p (a assumed a residue)."""
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, tt = 0, t
        while tt != 1:
            tt = tt * tt % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def _random_point(A, B, p, rng):
    while True:
        x = rng.randrange(p)
        rhs = (x * x * x + A * x + B) % p
        if rhs == 0:
            return (x, 0)
        if pow(rhs, (p - 1) // 2, p) == 1:
            return (x, _sqrt_mod(rhs, p))


def _orders_in_interval(P, A, p, lo, hi):
    """All N in [lo, hi] with N*P = O, by baby-step giant-step."""
    width = hi - lo
    m = math.isqrt(width) + 1
    baby = {}
    R = None
    for j in range(m):
        baby.setdefault(R, []).append(j)  # R = jP
        R = _ec_add(R, P, A, p)
    step = _ec_mul(P, m, A, p)
    out = []
    G = _ec_mul(P, lo, A, p)
    for k in range(m + 1):
        # lo*P + k*m*P = -j*P  <=>  (lo + k m + j) P = O
        neg = None if G is None else (G[0], -G[1] % p)
        for j in baby.get(neg, ()):
            N = lo + k * m + j
            if lo <= N <= hi:
                out.append(N)
        G = _ec_add(G, step, A, p)
    return sorted(set(out))


def ap_bsgs(E: WeierstrassCurve, p: int, seed: int = 0) -> int:
    """a_p at a good prime p from point orders on E and its quadratic twist.

    Above 229 one of the two always has a point whose order has a unique
    multiple in the Hasse interval (Mestre); below that the count is naive.
    """
    if p <= MESTRE_BOUND:
        return ap_naive(E, p)
    A = (-27 * E.c4) % p
    B = (-54 * E.c6) % p
    # non-residue for the quadratic twist
    u = 2
    while pow(u, (p - 1) // 2, p) != p - 1:
        u += 1
    At, Bt = A * u * u % p, B * u**3 % p
    rng = random.Random(seed * 1_000_003 + p)
    r = math.isqrt(4 * p)
    lo, hi = p + 1 - r, p + 1 + r
    candidates = set(range(lo, hi + 1))
    for _ in range(60):
        P = _random_point(A, B, p, rng)
        candidates &= set(_orders_in_interval(P, A, p, lo, hi))
        Q = _random_point(At, Bt, p, rng)
        # #E'(F_p) = 2p + 2 - #E(F_p)
        twist_ok = {2 * p + 2 - N for N in _orders_in_interval(Q, At, p, lo, hi)}
        candidates &= twist_ok
        if len(candidates) == 1:
            return p + 1 - candidates.pop()
    raise RuntimeError(f"could not pin down #E(F_{p})")


def ap(E: WeierstrassCurve, p: int, local=None) -> int:
    """Trace of Frobenius at p; at bad p: 1 split, -1 nonsplit, 0 additive.

    local is an optional {p: LocalData} map to avoid rerunning Tate.
    """
    if local is None:
        local = {ld.p: ld for ld in all_local_data(E)}
    ld = local.get(p)
    if ld is not None and ld.f_p > 0:
        if ld.f_p == 1:
            return 1 if ld.split else -1
        return 0
    if p <= NAIVE_COUNT_LIMIT:
        return ap_naive(E, p)
    return ap_bsgs(E, p)


# -- coefficients -----------------------------------------------------------------


@dataclass(frozen=True)
class CoefficientVector:
    curve: WeierstrassCurve
    N: int
    a: np.ndarray = field(repr=False)  # a[n] for 0 <= n <= n_max, a[0] = 0

    @property
    def n_max(self) -> int:
        return len(self.a) - 1


def _conductor_and_local(E):
    local = {ld.p: ld for ld in all_local_data(E)}
    N = 1
    for ld in local.values():
        N *= ld.p**ld.f_p
    return N, local


def an_vector(E: WeierstrassCurve, n_max: int) -> CoefficientVector:
    """a_n for n <= n_max, extended multiplicatively from a_p."""
    if n_max < 1:
        raise ValueError("n_max must be positive")
    N, local = _conductor_and_local(E)
    a = np.zeros(n_max + 1, dtype=np.int64)
    a[1] = 1
    spf = np.zeros(n_max + 1, dtype=np.int64)
    for p in primes_up_to(n_max):
        spf[p :: p][spf[p :: p] == 0] = p
        app = ap(E, p, local)
        good = N % p != 0
        if good:
            assert app * app <= 4 * p, f"Hasse bound violated at p={p}"
        prev, cur, pk = 1, app, p
        a[p] = app
        while pk * p <= n_max:
            nxt = app * cur - p * prev if good else app * cur
            pk *= p
            prev, cur = cur, nxt
            a[pk] = cur
    for n in range(2, n_max + 1):
        p = int(spf[n])
        if p == n:
            continue
        m, pk = n, 1
        while m % p == 0:
            m //= p
            pk *= p
        if m > 1:
            a[n] = a[pk] * a[m]
    return CoefficientVector(E, N, a)


# -- analytic quantities -----------------------------------------------------------


def _geometric_tail(c, M, weight_power):
    # bound on sum_{n>M} 2 n^weight_power exp(-c n) using |a_n| <= 2n
    x = math.exp(-c)
    if weight_power == 0:
        return 2 * x ** (M + 1) / (1 - x)
    return 2 * (M + 1) * x ** (M + 1) / (1 - x) ** 2


def terms_needed(N: int, target: float, scale: float = 1.0, weight_power: int = 0) -> int:
    """Smallest M whose tail bound at decay rate 2 pi scale / sqrt(N) is < target."""
    c = 2 * math.pi * scale / math.sqrt(N)
    M = max(10, int(math.sqrt(N) * math.log(1 / target) / (2 * math.pi * scale)))
    while 2 * _geometric_tail(c, M, weight_power) >= target:
        M = int(M * 1.1) + 10
    if M > N_MAX_CAP:
        raise PrecisionError(f"need {M} coefficients, above the cap {N_MAX_CAP}")
    return M


def theta(coeffs: CoefficientVector, t: float, n_max: int | None = None) -> float:
    """F(t) = sum a_n exp(-2 pi n t / sqrt(N))."""
    M = coeffs.n_max if n_max is None else n_max
    n = np.arange(1, M + 1)
    w = np.exp(-2 * math.pi * n * t / math.sqrt(coeffs.N))
    return float(np.dot(coeffs.a[1 : M + 1], w))


def fe_residuals(coeffs: CoefficientVector, points=FE_TEST_POINTS) -> dict[int, float]:
    """max over test points of |F(1/t) - w t^2 F(t)| for w = +1 and -1."""
    out = {1: 0.0, -1: 0.0}
    for t in points:
        lhs = theta(coeffs, 1 / t)
        rhs = t * t * theta(coeffs, t)
        out[1] = max(out[1], abs(lhs - rhs))
        out[-1] = max(out[-1], abs(lhs + rhs))
    return out


def root_number(E: WeierstrassCurve, coeffs: CoefficientVector | None = None) -> tuple[int, float]:
    """Root number decided by the theta functional equation.

    Returns (w, residual); raises RootNumberError when neither sign fits.
    """
    if coeffs is None:
        N, _ = _conductor_and_local(E)
        M = terms_needed(N, 1e-12, scale=1 / max(FE_TEST_POINTS), weight_power=1)
        coeffs = an_vector(E, M)
    res = fe_residuals(coeffs)
    w = 1 if res[1] <= res[-1] else -1
    if res[w] >= DECISION_TOLERANCE or res[-w] < 100 * DECISION_TOLERANCE:
        raise RootNumberError(
            f"functional equation inconclusive for {E} (N={coeffs.N}): residuals {res}"
        )
    return w, res[w]


@dataclass(frozen=True)
class CentralLValue:
    value: float
    order: int  # 0: value is L(E,1); 1: value is L'(E,1)
    w: int
    n_max: int
    tail_bound: float
    fe_residual: float
    N: int

    @property
    def vanishes(self) -> bool:
        """The reported value is numerically zero: the true order exceeds it."""
        return abs(self.value) < DECISION_TOLERANCE

    @property
    def rank_status(self) -> str:
        """Analytic rank "0" or "1", or "undetermined" when the order is >= 2."""
        return "undetermined" if self.vanishes else str(self.order)

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "order": self.order,
            "rank_status": self.rank_status,
            "w": self.w,
            "n_max": self.n_max,
            "tail_bound": self.tail_bound,
            "fe_residual": self.fe_residual,
            "conductor": self.N,
        }


def _l1_sum(coeffs, M, order):
    n = np.arange(1, M + 1, dtype=np.float64)
    x = 2 * math.pi * n / math.sqrt(coeffs.N)
    weights = np.exp(-x) if order == 0 else exp1(x)
    return 2 * float(np.sum(coeffs.a[1 : M + 1] / n * weights))


def l_value_two_sided(coeffs: CoefficientVector, w: int, A: float = 1.2, n_max: int | None = None) -> float:
    """L(E,1) from sum (a_n/n)(exp(-2 pi n/(A sqrt N)) + w exp(-2 pi n A/sqrt N)).

    Valid for any A > 0 once the functional equation holds with sign w; for
    w = -1 it is a numerical zero.
    """
    M = coeffs.n_max if n_max is None else n_max
    n = np.arange(1, M + 1, dtype=np.float64)
    s = math.sqrt(coeffs.N)
    weights = np.exp(-2 * math.pi * n / (A * s)) + w * np.exp(-2 * math.pi * n * A / s)
    return float(np.sum(coeffs.a[1 : M + 1] / n * weights))


def central_value(E: WeierstrassCurve, target: float = VALUE_TARGET, n_max: int | None = None) -> CentralLValue:
    """L(E,1) when w = +1, L'(E,1) when w = -1, with a rigorous tail bound.

    E must be a minimal model. A supplied n_max overrides the automatic
    choice but must still meet the target.
    """
    N, _ = _conductor_and_local(E)
    need_fe = terms_needed(N, 1e-12, scale=1 / max(FE_TEST_POINTS), weight_power=1)
    need_val = terms_needed(N, target / 10)
    M = max(need_val, n_max or 0)
    coeffs = an_vector(E, max(M, need_fe))
    w, res = root_number(E, coeffs)
    order = 0 if w == 1 else 1
    c = 2 * math.pi / math.sqrt(N)
    tail = 2 * _geometric_tail(c, M, 0)
    if order == 1:
        tail /= c * (M + 1)  # E1(x) <= exp(-x)/x
    if tail >= target:
        raise PrecisionError(f"tail bound {tail:.3g} does not meet target {target:.3g}")
    value = _l1_sum(coeffs, M, order)
    return CentralLValue(value, order, w, M, tail, res, N)
