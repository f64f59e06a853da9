import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import dirichlet_compose, naive_reduce, reduced_forms_by_enumeration, trial_factor
from tslab.arith import fundamental_discriminants_in_range
from tslab.quadforms import (
    BinaryQuadraticForm,
    class_group_invariants,
    class_group_structure,
    class_number,
    compose_forms,
    form_order,
    form_power,
    principal_form,
    reduce_form,
    reduced_forms,
    torsion_count,
)

SMALL_DS = fundamental_discriminants_in_range(-2000, -3, sign="negative")


def test_reduce_examples():
    assert reduce_form((1, 0, 1)) == (1, 0, 1)
    assert reduce_form((5, -4, 1)) == (1, 0, 1)
    assert reduce_form((2, 1, 3)) == (2, 1, 3)


def test_reduce_rejects_bad_forms():
    with pytest.raises(ValueError):
        reduce_form((1, 3, 1))  # indefinite
    with pytest.raises(ValueError):
        reduce_form((-1, 0, -1))  # negative definite


@given(
    st.sampled_from(SMALL_DS[::7]),
    st.lists(st.tuples(st.sampled_from([0, 1, 2]), st.integers(-3, 3)), min_size=1, max_size=8),
)
@settings(max_examples=200, deadline=None)
def test_reduce_unique_in_class(D, moves):
    """Random SL2(Z) moves never change the reduced representative."""
    for f in reduced_forms(D)[:5]:
        a, b, c = f
        for kind, k in moves:
            if kind == 0:  # x -> x + k y
                a, b, c = a, b + 2 * k * a, a * k * k + b * k + c
            elif kind == 1:  # (x, y) -> (-y, x)
                a, b, c = c, -b, a
            else:  # y -> y + k x
                a, b, c = a + b * k + c * k * k, b + 2 * k * c, c
        assert b * b - 4 * a * c == D
        g = reduce_form((a, b, c))
        assert g == f
        assert reduce_form(g) == g
        assert naive_reduce(a, b, c) == tuple(f)


def test_compose_examples():
    D = -23
    e = principal_form(D)
    for g in reduced_forms(D):
        assert compose_forms(e, g) == g
    assert compose_forms((2, 1, 3), (2, -1, 3)) == (1, 1, 6)
    assert compose_forms((2, 1, 3), (2, 1, 3)) == (2, -1, 3)


def test_compose_rejects_mismatched_D():
    with pytest.raises(ValueError):
        compose_forms((2, 1, 3), (1, 1, 1))


def test_compose_matches_dirichlet_oracle():
    checked = 0
    for D in SMALL_DS[::5]:
        forms = reduced_forms(D)
        for f, g in itertools.product(forms[:8], repeat=2):
            want = dirichlet_compose(f, g)
            if want is None:
                continue
            assert compose_forms(f, g) == want
            checked += 1
    assert checked > 1000


def test_reduced_forms_match_enumeration():
    for D in SMALL_DS:
        assert [tuple(f) for f in reduced_forms(D)] == reduced_forms_by_enumeration(D)


def test_class_numbers():
    assert class_number(-3) == 1
    assert class_number(-4) == 1
    assert class_number(-15) == 2
    assert class_number(-23) == 3
    assert class_number(-47) == 5
    assert [tuple(f) for f in reduced_forms(-15)] == [(1, 1, 4), (2, 1, 2)]


def test_structure_examples():
    G = class_group_structure(-3)
    assert (G.h, G.elementary_divisors) == (1, ())
    G = class_group_structure(-23)
    assert (G.h, G.elementary_divisors) == (3, (3,))
    G = class_group_structure(-47)
    assert (G.h, G.elementary_divisors) == (5, (5,))
    assert class_group_structure(-420).elementary_divisors == (2, 2, 2)
    assert class_group_structure(-3299).elementary_divisors == (3, 9)


def test_structure_rejects():
    with pytest.raises(ValueError):
        class_group_structure(5)
    with pytest.raises(ValueError):
        class_group_structure(-12)


def test_torsion_count_examples():
    assert torsion_count(class_group_structure(-23), 3) == 3
    assert torsion_count(class_group_structure(-23), 2) == 1
    assert torsion_count(class_group_structure(-15), 2) == 2


def _brute_group_law(D):
    forms = [tuple(f) for f in reduced_forms(D)]
    table = {(f, g): tuple(compose_forms(f, g)) for f in forms for g in forms}
    return forms, table


def test_group_law_full_tables():
    """Associativity, commutativity and inverses on every reduced form,
    |D| <= 2000."""
    for D in SMALL_DS:
        forms, T = _brute_group_law(D)
        e = tuple(principal_form(D))
        for f in forms:
            assert T[(f, e)] == f
            inv = tuple(reduce_form(BinaryQuadraticForm(f[0], -f[1], f[2])))
            assert T[(f, inv)] == e
            for g in forms:
                assert T[(f, g)] == T[(g, f)]
        for f, g, k in itertools.product(forms, repeat=3):
            assert T[(T[(f, g)], k)] == T[(f, T[(g, k)])]


def test_structure_invariants_small():
    for D in SMALL_DS:
        G = class_group_structure(D)
        d = G.elementary_divisors
        assert math.prod(d) == G.h == class_number(D)
        assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
        assert all(x >= 2 for x in d)
        assert [form_order(g) for g in G.generators] == list(d)
        assert class_group_invariants(D) == (G.h, d)
        # the generators give an isomorphism from prod Z/d_i
        elems = set()
        for ks in itertools.product(*(range(x) for x in d)):
            f = principal_form(D)
            for g, k in zip(G.generators, ks):
                f = compose_forms(f, form_power(g, k))
            elems.add(tuple(f))
        assert len(elems) == G.h


def test_torsion_count_brute_force():
    for D in SMALL_DS:
        forms = reduced_forms(D)
        G = class_group_structure(D)
        for m in (2, 3, 4, 5):
            brute = sum(1 for f in forms if form_power(f, m)[0] == 1)
            assert torsion_count(G, m) == brute


def test_genus_theory_small_range():
    for D in fundamental_discriminants_in_range(-20000, -3, sign="negative"):
        t = len(trial_factor(D))
        h, d = class_group_invariants(D)
        assert math.prod(math.gcd(x, 2) for x in d) == 2 ** (t - 1)
