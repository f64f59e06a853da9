"""Exact integer foundations: primality, factorization, Kronecker symbols and
fundamental discriminants.

Everything here works on Python ints, so there is no overflow anywhere.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Deterministic Miller-Rabin: the first 12 primes are a valid witness set
# for every n < 3.3e24, which covers all 64-bit inputs with room to spare.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_TRIAL_BOUND = 1000
_SMALL_PRIMES = None


def _small_primes():
    global _SMALL_PRIMES
    if _SMALL_PRIMES is None:
        _SMALL_PRIMES = primes_up_to(_TRIAL_BOUND)
    return _SMALL_PRIMES


def primes_up_to(n: int) -> list[int]:
    """All primes <= n, by a numpy sieve."""
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return [int(p) for p in np.nonzero(sieve)[0]]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random) -> int:
    """A nontrivial factor of the composite odd n."""
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...]

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    def product(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out


def factorize(n: int) -> Factorization:
    """Factor |n| into primes, trial division first and Brent-Pollard rho
    (fixed seed) for what remains."""
    if n == 0:
        raise ValueError("cannot factor 0")
    return Factorization(n, _factor_abs(abs(n)))


@lru_cache(maxsize=65536)
def _factor_abs(m: int) -> tuple[tuple[int, int], ...]:
    counts: dict[int, int] = {}
    for p in _small_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            counts[p] = e
    if m > 1:
        stack = [m]
        rng = random.Random(0x5EED)
        while stack:
            x = stack.pop()
            if x == 1:
                continue
            if is_prime(x):
                counts[x] = counts.get(x, 0) + 1
                continue
            r = math.isqrt(x)
            if r * r == x:
                stack += [r, r]
                continue
            d = _pollard_brent(x, rng)
            stack += [d, x // d]
    return tuple(sorted(counts.items()))


def prime_divisors(n: int) -> list[int]:
    return factorize(n).primes()


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def squarefree_part(n: int) -> int:
    """The signed squarefree integer in the square class of n."""
    if n == 0:
        raise ValueError("0 has no square class")
    out = -1 if n < 0 else 1
    for p, e in factorize(n):
        if e % 2:
            out *= p
    return out


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for _, e in factorize(n))


def kronecker_symbol(a: int, b: int) -> int:
    """Kronecker symbol (a/b) for arbitrary integers a, b."""
    if b == 0:
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and b % 2 == 0:
        return 0
    sign = 1
    if b < 0:
        b = -b
        if a < 0:
            sign = -sign
    v = 0
    while b % 2 == 0:
        b //= 2
        v += 1
    if v % 2 and a % 8 in (3, 5):
        sign = -sign
    # b is now odd and positive: Jacobi symbol
    a %= b
    while a:
        while a % 2 == 0:
            a //= 2
            if b % 8 in (3, 5):
                sign = -sign
        a, b = b, a
        if a % 4 == 3 and b % 4 == 3:
            sign = -sign
        a %= b
    return sign if b == 1 else 0


def is_fundamental_discriminant(D: int) -> bool:
    if D in (0, 1):
        return False
    r = D % 4
    if r == 1:
        return is_squarefree(D)
    if r == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def _squarefree_mask(lo: int, hi: int) -> np.ndarray:
    """mask[i] is True iff lo + i is squarefree (lo >= 1)."""
    mask = np.ones(hi - lo + 1, dtype=bool)
    for p in primes_up_to(math.isqrt(hi)):
        q = p * p
        start = (-lo) % q
        mask[start::q] = False
    return mask


def fundamental_discriminants_in_range(lo: int, hi: int, sign: str = "all") -> list[int]:
    """Fundamental discriminants in [lo, hi], ascending.

    sign is "all" or "negative".
    """
    if sign not in ("all", "negative"):
        raise ValueError(f"unknown sign filter {sign!r}")
    if sign == "negative":
        hi = min(hi, -1)
    if lo > hi:
        return []
    out: list[int] = []
    neg_lo, neg_hi = lo, min(hi, -1)
    if neg_lo <= neg_hi:
        out += [-d for d in reversed(_fund_abs(-neg_hi, -neg_lo, -1))]
    pos_lo, pos_hi = max(lo, 2), hi
    if pos_lo <= pos_hi:
        out += _fund_abs(pos_lo, pos_hi, 1)
    return out


def _fund_abs(lo: int, hi: int, sgn: int) -> list[int]:
    """Values n in [lo, hi] (lo >= 1) with sgn*n a fundamental discriminant."""
    sf = _squarefree_mask(1, max(hi, 1))
    out = []
    for n in range(lo, hi + 1):
        d = sgn * n
        if d % 4 == 1 and sf[n - 1]:
            out.append(n)
        elif d % 4 == 0:
            m = d // 4
            if m % 4 in (2, 3) and sf[abs(m) - 1]:
                out.append(n)
    return out
