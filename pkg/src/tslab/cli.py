"""Command-line interface: classgroup, sel2, verify-bsd and scan."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .arith import is_fundamental_discriminant
from .bsd import CONDITIONAL_NOTE, report_passes, verify_bsd
from .descent import sel2_group
from .quadforms import class_group_structure, torsion_count
from .registry import resolve_curve
from .scan import DEFAULT_ALPHA, DEFAULT_BETA, DEFAULT_DESCENT_LIMIT, run_scan, summary_text
from .weierstrass import minimal_model, quadratic_twist

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_RANK_UNDETERMINED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _check_twist_D(D: int, allow_one: bool = True) -> None:
    if allow_one and D == 1:
        return
    if not is_fundamental_discriminant(D):
        raise UsageError(f"D = {D} is not a fundamental discriminant (or 1 for no twist)")


def _curve(text: str):
    try:
        return resolve_curve(text)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None


def cmd_classgroup(args) -> int:
    D = args.D
    if D >= 0:
        raise UsageError(f"D = {D}: only negative fundamental discriminants are supported")
    if not is_fundamental_discriminant(D):
        raise UsageError(f"D = {D} is not a fundamental discriminant")
    G = class_group_structure(D)
    hm = {m: torsion_count(G, m) for m in (2, 3, 4, 5)}
    if args.json:
        out = G.as_dict()
        out.update({f"h{m}": v for m, v in hm.items()})
        print(json.dumps(out, sort_keys=True))
        return EXIT_OK
    print(f"D = {D}")
    print(f"h = {G.h}")
    print("structure = " + (" x ".join(f"Z/{d}" for d in G.elementary_divisors) or "trivial"))
    print("generators = " + (" ".join(f"({a},{b},{c})" for a, b, c in G.generators) or "none"))
    print(" ".join(f"h{m}={v}" for m, v in hm.items()))
    return EXIT_OK


def cmd_sel2(args) -> int:
    name, E = _curve(args.curve)
    _check_twist_D(args.D)
    twist = minimal_model(E)[0] if args.D == 1 else quadratic_twist(E, args.D)
    try:
        sel = sel2_group(twist, args.search_bound)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sandwich = sel.torsion_image_dim + sel.rank_lower_bound <= sel.dimension
    if args.json:
        out = sel.as_dict()
        out.update({"label": name, "D": args.D, "sandwich_ok": sandwich})
        print(json.dumps(out, sort_keys=True))
    else:
        print(f"curve = {name}  D = {args.D}  twist = {twist}")
        print(f"roots = {sel.roots}  S = {list(sel.group.S)}")
        print(f"dim Sel2 = {sel.dimension}")
        print("basis = " + (" ".join(f"({a},{b})" for a, b in sel.basis_pairs) or "none"))
        print(f"torsion image dim = {sel.torsion_image_dim}")
        print(f"point-search rank lower bound = {sel.rank_lower_bound}")
        for x, y in sel.points:
            print(f"  point x={x} y={y}")
        print(
            f"sandwich {sel.torsion_image_dim} + {sel.rank_lower_bound} <= {sel.dimension}: "
            + ("ok" if sandwich else "VIOLATED")
        )
    return EXIT_OK if sandwich else EXIT_CHECK_FAILED


def cmd_verify_bsd(args) -> int:
    name, E = _curve(args.curve)
    _check_twist_D(args.D)
    report = verify_bsd(E, args.D, curve=name)
    if args.json:
        print(json.dumps(report.as_dict(), sort_keys=True))
    else:
        L = report.L_term
        print(f"curve = {name}  D = {args.D}  twist = {report.twist}")
        print(f"conductor = {L.N}  root number = {L.w:+d}  fe_residual = {L.fe_residual:.3e}")
        kind = "L(E,1)" if L.order == 0 else "L'(E,1)"
        print(f"{kind} = {L.value:.12f}  (n_max={L.n_max}, tail<{L.tail_bound:.1e})")
        print(f"omega_used = {report.omega.omega_used:.12f}  components = {report.omega.components}")
        print("tamagawa = " + (" ".join(f"c_{ld.p}={ld.c_p}[{ld.kodaira}]" for ld in report.local_data) or "none"))
        print(f"torsion order = {report.torsion_order}")
        if report.sel2_dim is not None:
            print(f"dim Sel2 = {report.sel2_dim}")
        print(f"rank status = {report.rank_status}")
        if report.rank_status == "0":
            print(f"Sha (analytic) = {report.sha_analytic:.8f}  rounded = {report.sha_rounded}")
            print(f"checks: square={report.checks['square']} two_part={report.checks.get('two_part')}")
        print(CONDITIONAL_NOTE)
    if report.rank_status == "1":
        print("rank >= 1: analytic Sha skipped, Sel2 and L' reported", file=sys.stderr)
        return EXIT_RANK_UNDETERMINED
    if report.rank_status == "undetermined":
        print("L(E,1) vanishes numerically with root number +1: rank >= 2, analytic Sha skipped", file=sys.stderr)
        return EXIT_RANK_UNDETERMINED
    return EXIT_OK if report_passes(report) else EXIT_CHECK_FAILED


def _ms(text: str):
    try:
        ms = tuple(sorted({int(x) for x in text.split(",") if x}))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad m list {text!r}") from None
    if not ms or any(m not in (2, 3, 4, 5) for m in ms):
        raise argparse.ArgumentTypeError("m must be drawn from 2,3,4,5")
    return ms


def cmd_scan(args) -> int:
    name, E = _curve(args.curve)
    if args.min > args.max:
        raise UsageError("--min must not exceed --max")
    try:
        result = run_scan(
            args.min, args.max, E, args.m, args.descent_limit, args.threads, args.alpha, args.beta
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    with open(args.out, "w", newline="") as fh:
        fh.write(result.csv_text())
    sys.stdout.write(f"curve: {name}\nrange: [{args.min}, {args.max}]\n")
    sys.stdout.write(summary_text(result.summary))
    for f in result.failures:
        print(f"failure: {f}", file=sys.stderr)
    if result.failures or result.summary["bound_violations"]:
        return EXIT_CHECK_FAILED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tslab", description="Class-group torsion, 2-Selmer groups and BSD checks.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classgroup", help="class group of Q(sqrt D), D < 0")
    c.add_argument("-D", type=int, required=True)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_classgroup)

    s = sub.add_parser("sel2", help="2-Selmer group of a twist")
    s.add_argument("--curve", required=True, help="registry label (m2..m5) or a1,a2,a3,a4,a6")
    s.add_argument("-D", type=int, default=1)
    s.add_argument("--search-bound", type=int, default=100)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_sel2)

    b = sub.add_parser("verify-bsd", help="BSD terms and analytic Sha of a twist")
    b.add_argument("--curve", required=True)
    b.add_argument("-D", type=int, default=1)
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_verify_bsd)

    sc = sub.add_parser("scan", help="scan fundamental discriminants and write CSV")
    sc.add_argument("--min", type=int, required=True)
    sc.add_argument("--max", type=int, required=True)
    sc.add_argument("--curve", default="m2")
    sc.add_argument("--m", type=_ms, default=(2, 3, 4, 5))
    sc.add_argument("--descent-limit", type=int, default=DEFAULT_DESCENT_LIMIT)
    sc.add_argument("--out", required=True)
    sc.add_argument("--threads", type=int, default=None, help="worker processes (default: TSLAB_THREADS or 1)")
    sc.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    sc.add_argument("--beta", type=float, default=DEFAULT_BETA)
    sc.set_defaults(func=cmd_scan)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"tslab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
