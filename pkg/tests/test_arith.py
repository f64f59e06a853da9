import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import is_fundamental_by_definition, legendre_by_enumeration, trial_factor
from tslab.arith import (
    factorize,
    fundamental_discriminants_in_range,
    is_fundamental_discriminant,
    is_prime,
    kronecker_symbol,
    primes_up_to,
)


def test_factorize_examples():
    assert list(factorize(1)) == []
    assert list(factorize(12)) == [(2, 2), (3, 1)]
    assert list(factorize(10403)) == [(101, 1), (103, 1)]
    assert list(factorize(-12)) == [(2, 2), (3, 1)]


def test_factorize_matches_trial_division():
    for n in [10403, 2**31 - 1, 600851475143, 999983 * 1000003, 2**10 * 3**7 * 97]:
        assert list(factorize(n)) == trial_factor(n)


def test_factorize_zero_rejected():
    with pytest.raises(ValueError):
        factorize(0)


def test_factorize_random_products():
    rng = np.random.default_rng(20240611)
    for n in rng.integers(1, 10**12, size=10_000):
        n = int(n)
        f = factorize(n)
        assert math.prod(p**e for p, e in f) == n
        primes = [p for p, _ in f]
        assert primes == sorted(set(primes))
        assert all(is_prime(p) for p in primes)


@given(st.integers(min_value=-(10**15), max_value=10**15).filter(lambda n: n != 0))
@settings(max_examples=300, deadline=None)
def test_factorize_property(n):
    f = factorize(n)
    assert f.value == n
    assert math.prod(p**e for p, e in f) == abs(n)
    assert all(e >= 1 for _, e in f)
    assert factorize(n) == f  # deterministic


def test_is_prime_against_sieve():
    primes = set(primes_up_to(20000))
    assert all(is_prime(n) == (n in primes) for n in range(20000))
    # strong pseudoprimes to several small bases
    for n in [3215031751, 2152302898747, 3474749660383, 341550071728321]:
        assert not is_prime(n)
    assert is_prime(2**61 - 1)


def test_kronecker_examples():
    assert kronecker_symbol(2, 7) == 1
    assert all(kronecker_symbol(a, 1) == 1 for a in range(-50, 50))
    for p in [3, 7, 11, 19, 23, 43]:
        assert kronecker_symbol(-1, p) == -1


def test_kronecker_zero_conventions():
    # (0/b) = 0 unless b = +-1, (a/0) = 1 only for a = +-1; with these
    # conventions multiplicativity needs nonzero arguments
    assert kronecker_symbol(0, 1) == kronecker_symbol(0, -1) == 1
    assert all(kronecker_symbol(0, b) == 0 for b in range(2, 50))
    assert [a for a in range(-10, 11) if kronecker_symbol(a, 0)] == [-1, 1]


def test_kronecker_matches_legendre():
    for p in primes_up_to(200)[1:]:
        for a in range(-30, 60):
            assert kronecker_symbol(a, p) == legendre_by_enumeration(a, p)


def test_kronecker_multiplicative_in_top_argument():
    # all nonzero |a|, |a'|, |b| <= 200; products are looked up once each
    rng = [a for a in range(-200, 201) if a != 0]
    bs = rng
    prods = sorted({a * a2 for a in rng for a2 in rng})
    for b in bs:
        single = {a: kronecker_symbol(a, b) for a in rng}
        prod_vals = {n: kronecker_symbol(n, b) for n in prods}
        for a in rng:
            ka = single[a]
            for a2 in rng:
                assert ka * single[a2] == prod_vals[a * a2]


def test_kronecker_multiplicative_in_bottom_argument():
    nonzero = [b for b in range(-40, 41) if b != 0]
    for a in range(-40, 41):
        for b in nonzero:
            for b2 in nonzero:
                assert kronecker_symbol(a, b) * kronecker_symbol(a, b2) == kronecker_symbol(a, b * b2)


def test_fundamental_examples():
    assert fundamental_discriminants_in_range(-4, -3) == [-4, -3]
    assert fundamental_discriminants_in_range(-12, -11) == [-11]
    assert len(fundamental_discriminants_in_range(-10000, -3, sign="negative")) == 3043
    assert fundamental_discriminants_in_range(-3, -4) == []


def test_fundamental_range_matches_definition():
    got = fundamental_discriminants_in_range(-3000, 3000)
    want = [D for D in range(-3000, 3001) if is_fundamental_by_definition(D)]
    assert got == want
    assert all(is_fundamental_discriminant(D) for D in got)
    neg = fundamental_discriminants_in_range(-3000, 3000, sign="negative")
    assert neg == [D for D in want if D < 0]


@given(st.integers(min_value=-(10**6), max_value=10**6))
@settings(max_examples=500, deadline=None)
def test_fundamental_predicate_property(D):
    assert is_fundamental_discriminant(D) == is_fundamental_by_definition(D)
