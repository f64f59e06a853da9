from dataclasses import replace

import pytest

from oracles import period_by_quadrature
from tslab.arith import fundamental_discriminants_in_range
from tslab.bsd import (
    ROUNDING_TOLERANCE,
    analytic_sha_rank0,
    report_passes,
    round_sha,
    sha_from_terms,
    two_part_consistency,
    verify_bsd,
)
from tslab.descent import sel2_group
from tslab.registry import load_registry
from tslab.weierstrass import WeierstrassCurve, quadratic_twist

M2 = WeierstrassCurve(0, 0, 0, -1, 0)
C11 = WeierstrassCurve(0, -1, 1, -10, -20)


def test_round_sha():
    assert round_sha(1.00001) == 1
    assert round_sha(3.99995) == 4
    assert round_sha(4.001) is None
    assert round_sha(2.0) is None  # not a square
    assert round_sha(0.0) is None
    assert round_sha(9 + ROUNDING_TOLERANCE / 2) == 9


def test_sha_one_for_base_curves():
    for E, name in [(C11, "11a1"), (M2, "m2"), (load_registry()["m4"].curve, "m4")]:
        r = verify_bsd(E, 1, name)
        assert r.rank_status == "0"
        assert abs(r.sha_analytic - 1) < 1e-8 and r.sha_rounded == 1
        assert report_passes(r)
    r = verify_bsd(C11, 1, "11a1")
    assert (r.tamagawa_product, r.torsion_order) == (5, 5)
    assert r.checks["two_part"] is None  # only 5-torsion


def test_known_nontrivial_sha():
    want = {17: 4, -43: 9, -68: 4, 73: 4}
    for D, sha in want.items():
        r = verify_bsd(M2, D, "m2")
        assert r.sha_rounded == sha
        assert r.checks["two_part"] is True
        assert report_passes(r)


def test_quadrature_period_gives_same_sha():
    for D in (-3, 17, -43, 8):
        r = verify_bsd(M2, D)
        omega = period_by_quadrature(r.twist.ainvs)
        sha = sha_from_terms(r.L_term.value, omega, r.tamagawa_product, r.torsion_order)
        assert abs(sha - r.sha_analytic) < 1e-8


def test_fault_injection_tamagawa_doubled():
    r = verify_bsd(M2, 17, "m2")
    bad_sha = sha_from_terms(r.L_term.value, r.omega.omega_used, 2 * r.tamagawa_product, r.torsion_order)
    bad = replace(r, tamagawa_product=2 * r.tamagawa_product, sha_analytic=bad_sha, sha_rounded=round_sha(bad_sha))
    ok, detail = two_part_consistency(bad, sel2_group(bad.twist))
    bad = replace(bad, checks={**r.checks, "square": bad.sha_rounded is not None, "two_part": ok})
    assert bad.sha_rounded is None and ok is False
    assert not report_passes(bad)
    assert report_passes(r)


def test_fault_injection_wrong_selmer():
    # a report whose Sha disagrees with Sel2 must fail the 2-part check
    r = verify_bsd(M2, -3, "m2")
    ok, _ = two_part_consistency(replace(r, sha_rounded=4), sel2_group(r.twist))
    assert ok is False


def test_invariance_under_precision_changes():
    for D in (-3, 17, -43):
        E = quadratic_twist(M2, D)
        a = analytic_sha_rank0(E)
        b = analytic_sha_rank0(E, n_max=2 * a.L_term.n_max, period_precision=1e-14)
        assert abs(a.sha_analytic - b.sha_analytic) < 1e-8
        assert a.sha_rounded == b.sha_rounded


def test_rank_escalation():
    r = verify_bsd(M2, 5, "m2")
    assert r.rank_status == "1" and r.sha_analytic is None
    assert r.checks["two_part"] is None
    assert r.checks["sel2_rank_bound"] >= r.checks["point_rank_lower_bound"] == 1
    r = verify_bsd(M2, 41, "m2")
    assert r.rank_status == "undetermined" and r.sha_analytic is None
    assert r.checks["point_rank_lower_bound"] == 2


def test_report_schema():
    d = verify_bsd(M2, -3, "m2").as_dict()
    for key in ("curve", "D", "L", "omega", "tamagawa", "torsion", "regulator", "sha_analytic", "sha_rounded", "sel2_dim", "checks"):
        assert key in d
    assert set(d["L"]) >= {"value", "order", "w", "n_max", "tail_bound", "fe_residual"}
    assert d["regulator"] == 1.0 and d["sel2_dim"] == 2


def test_finite_terms_ratio_logged_for_twists():
    # Omega * prod c_p / #tors^2 along the twist family; with Sha this
    # reconstructs L(E_D, 1) exactly
    for D in (-3, -8, -11, 17, -43):
        r = verify_bsd(M2, D)
        assert r.finite_terms_ratio > 0
        assert abs(r.finite_terms_ratio * r.sha_rounded - r.L_term.value) < 1e-8


def test_rank_zero_twists_in_fifty_set():
    Ds = sorted([D for D in fundamental_discriminants_in_range(-300, 300) if D != 1], key=lambda D: (abs(D), D))[:50]
    failures = []
    rank0 = 0
    for D in Ds:
        r = verify_bsd(M2, D, "m2")
        if r.rank_status != "0":
            continue
        rank0 += 1
        if r.sha_rounded is None or r.checks["two_part"] is not True:
            failures.append(D)
    assert rank0 >= 20 and failures == []


def test_other_registry_curves_rank_zero_twists():
    reg = load_registry()
    for label in ("m3", "m5"):
        for D in (-3, -4, 5, -7, -8):
            r = verify_bsd(reg[label].curve, D, label)
            if r.rank_status == "0":
                assert r.sha_rounded is not None, (label, D, r.sha_analytic)


def test_zero_twist_rejected():
    with pytest.raises(ValueError):
        verify_bsd(M2, 0)
