"""Command line front end.

Verbs: ``parse`` (normalize an abelian group expression and print its
invariants), ``classify`` (K_p-series, class parameters and fingerprint
of one wreath product), ``decide`` (same-variety decision for two
wreath products, with witnesses), ``witness`` (the separation witness
at one prime), ``oracle-verify`` (batch cross-check of the symbolic
route against enumeration).  Every verb accepts ``--json``.

Exit codes: 0 equal/success, 1 unequal, 2 parse error, 3 hypothesis
failure, 4 oracle mismatch.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional

from . import oracle
from .groupspec import (
    AbelianGroupSpec,
    ParseError,
    PassiveGroupSpec,
    equivalent,
    equivalent_p,
    parse_abelian,
    parse_passive,
    passive_atoms,
)
from .shield import NotNilpotentError, baumslag_reason, kp_series, shield_params
from .variety import (
    Decision,
    DecisionInput,
    SeparationWitness,
    Verdict,
    check_hypotheses,
    decide_equal,
    fingerprint,
    separation_witness,
)

EXIT_EQUAL = 0
EXIT_UNEQUAL = 1
EXIT_PARSE = 2
EXIT_HYPOTHESIS = 3
EXIT_ORACLE = 4


def _emit_json(obj) -> None:
    print(json.dumps(obj, indent=2))


def _parse_error(err: ParseError) -> int:
    print(f"error: {err.message}", file=sys.stderr)
    print(err.caret(), file=sys.stderr)
    return EXIT_PARSE


# ---------------------------------------------------------------------------
# parse


def _mult_json(copies):
    return copies.render() if copies.is_infinite else copies.as_int()


def run_parse(expr: str, as_json: bool) -> int:
    spec = parse_abelian(expr)
    primes = [
        {
            "p": p,
            "factors": [
                {"u": f.power, "mult": _mult_json(f.copies)}
                for f in spec.p_component(p).factors
            ],
        }
        for p in spec.primes()
    ]
    if as_json:
        _emit_json(
            {
                "expression": expr,
                "normalized": spec.render(),
                "trivial": spec.is_trivial(),
                "exponent": spec.exponent(),
                "primes": primes,
            }
        )
        return EXIT_EQUAL
    if spec.is_trivial():
        print("trivial group")
        return EXIT_EQUAL
    print(f"normalized: {spec.render()}")
    print(f"exponent:   {spec.exponent()}")
    for entry in primes:
        print(f"p = {entry['p']}:")
        for i, f in enumerate(entry["factors"], 1):
            print(f"  u_{i} = {f['u']:<3} mult = {f['mult']}")
    return EXIT_EQUAL


# ---------------------------------------------------------------------------
# classify


def run_classify(passive_expr: str, active_expr: str, as_json: bool) -> int:
    passive = parse_passive(passive_expr)
    active = parse_abelian(active_expr)
    if active.is_trivial():
        print("error: the active group must be nontrivial", file=sys.stderr)
        return EXIT_HYPOTHESIS
    fp = fingerprint(passive, active)
    chain = params = None
    reason = None
    if fp.nilpotent:
        p = passive.parts[0].prime
        chain = kp_series(active, p)
        params = shield_params(active, p)
    else:
        reason = baumslag_reason(passive, active)
    if as_json:
        _emit_json(
            {
                "passive": passive.render(),
                "active": active.render(),
                "fingerprint": fp.to_json_dict(),
                "params": None
                if params is None
                else {"d": params.d, "e": list(params.e), "a": params.a, "b": params.b},
                "chain": None if chain is None else [t.render() for t in chain.terms],
                "reason": reason,
            }
        )
        return EXIT_EQUAL
    print(f"passive: {passive.render()} (exponent {passive.exponent()}, "
          f"class {passive.nilpotency_class})")
    print(f"active:  {active.render()} (exponent {active.exponent()})")
    if not fp.nilpotent:
        print(f"not nilpotent (Baumslag: {reason})")
        print(f"wreath exponent: {fp.exponent}")
        if fp.solubility_bound is not None:
            print(f"solubility bound: {fp.solubility_bound}")
        return EXIT_EQUAL
    p = passive.parts[0].prime
    rendered = ", ".join(f"K_{i} = {t.render()}" for i, t in enumerate(chain.terms, 1))
    print(f"K_{p}-series: {rendered}")
    print(f"d = {params.d}, e = {list(params.e)}, a = {params.a}, b = {params.b}")
    s = list(passive.parts[0].gamma_exponents)
    print(f"s(h) = {s}")
    print(f"nilpotency class: {fp.nilpotency_class}")
    print(f"wreath exponent: {fp.exponent}")
    if fp.solubility_bound is not None:
        print(f"solubility bound: {fp.solubility_bound}")
    return EXIT_EQUAL


# ---------------------------------------------------------------------------
# decide / witness


def _decision_input(args) -> DecisionInput:
    return DecisionInput(
        a1=parse_passive(args.a1),
        a2=parse_passive(args.a2),
        b1=parse_abelian(args.b1),
        b2=parse_abelian(args.b2),
        assert_passive_var_equal=args.assert_var_equal,
    )


def _print_witness_text(w: SeparationWitness) -> None:
    small = 2 if w.larger_input == 1 else 1
    print(f"witness at p = {w.p}: divergence t = {w.t}, w = {w.w}")
    print(f"  reduced classes: {w.class_b1} (side B{w.larger_input}) "
          f"> {w.class_b2} (side B{small})")
    print(f"  separating variety {w.separating.render()}: contains the "
          f"B{small} wreath product, not the B{w.larger_input} one")


def _print_decision_text(decision: Decision) -> None:
    if decision.hypotheses:
        for v in decision.hypotheses:
            print(f"hypothesis: {v}")
    else:
        print("hypotheses: ok")
    for pv in decision.per_prime:
        if pv.equivalent:
            print(f"p = {pv.p}: equivalent")
        else:
            print(f"p = {pv.p}: NOT equivalent (t = {pv.divergence.t}, "
                  f"w = {pv.divergence.w})")
    print(f"verdict: {decision.verdict.value}"
          + (f" ({decision.reason})" if decision.reason else ""))
    if decision.witness is not None:
        _print_witness_text(decision.witness)
    for i, fp in enumerate(decision.fingerprints, 1):
        cls = fp.nilpotency_class if fp.nilpotent else "-"
        sol = fp.solubility_bound if fp.solubility_bound is not None else "-"
        print(f"fingerprint {i}: exponent {fp.exponent}, "
              f"nilpotent {str(fp.nilpotent).lower()}, class {cls}, "
              f"solubility bound {sol}")


_VERDICT_EXIT = {
    Verdict.EQUAL: EXIT_EQUAL,
    Verdict.UNEQUAL: EXIT_UNEQUAL,
    Verdict.NOT_APPLICABLE: EXIT_HYPOTHESIS,
}


def run_decide(args, as_json: bool) -> int:
    decision = decide_equal(_decision_input(args))
    if as_json:
        _emit_json(decision.to_json_dict())
    else:
        _print_decision_text(decision)
    return _VERDICT_EXIT[decision.verdict]


def run_witness(args, as_json: bool) -> int:
    inp = _decision_input(args)
    p = args.prime
    violations = check_hypotheses(inp)
    fatal = [v for v in violations if not v.startswith("active exponent mismatch")]
    if fatal:
        for v in fatal:
            print(f"hypothesis: {v}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    c1, c2 = inp.b1.p_component(p), inp.b2.p_component(p)
    if equivalent_p(c1, c2, p):
        if as_json:
            _emit_json({"p": p, "equivalent": True, "witness": None})
        else:
            print(f"p = {p}: equivalent; no witness exists")
        return EXIT_EQUAL
    witness = separation_witness(inp.a1, inp.b1, inp.b2, p)
    if as_json:
        _emit_json({"p": p, "equivalent": False, "witness": witness.to_json_dict()})
    else:
        print(f"p = {p}: NOT equivalent")
        _print_witness_text(witness)
    return EXIT_UNEQUAL


# ---------------------------------------------------------------------------
# oracle-verify


def _manifest_lines(path: str) -> list[tuple[int, str]]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if line and not line.startswith("#"):
                out.append((lineno, line))
    return out


def _split_wreath_line(line: str) -> tuple[str, str]:
    for sep in (" Wr ", " wr "):
        if sep in line:
            left, right = line.split(sep, 1)
            return left.strip(), right.strip()
    raise ValueError("expected '<passive> Wr <active>'")


def run_oracle_verify(manifest: str, budget: int, as_json: bool) -> int:
    if budget < 1:
        print("error: budget must be positive", file=sys.stderr)
        return EXIT_PARSE
    results = []
    mismatches = 0
    for lineno, line in _manifest_lines(manifest):
        try:
            passive_expr, active_expr = _split_wreath_line(line)
            atoms = passive_atoms(passive_expr)
            a_spec = parse_passive(passive_expr)
            b_spec = parse_abelian(active_expr)
        except (ParseError, ValueError) as err:
            print(f"{manifest}:{lineno}: error: {err}", file=sys.stderr)
            return EXIT_PARSE
        entry: dict = {"line": line}
        skip = _skip_reason(atoms, a_spec, b_spec, budget)
        if skip is not None:
            entry.update(status="skipped", reason=skip)
        else:
            a_conc = oracle.concrete_passive(atoms, budget)
            b_conc = oracle.concrete_abelian(b_spec, budget)
            report = oracle.verify_shield(a_spec, a_conc, b_spec, b_conc, budget)
            entry.update(status="ok" if report.ok else "mismatch",
                         report=report.to_json_dict())
            if not report.ok:
                mismatches += 1
        results.append(entry)
    if as_json:
        _emit_json({"manifest": manifest, "budget": budget,
                    "mismatches": mismatches, "lines": results})
    else:
        for entry in results:
            if entry["status"] == "skipped":
                print(f"{entry['line']}: skipped ({entry['reason']})")
            else:
                r = entry["report"]
                print(f"{entry['line']}: {entry['status']} "
                      f"(class {r['shield_class']} vs {r['oracle_class']}, "
                      f"exponent {r['spec_exponent']} vs {r['oracle_exponent']}, "
                      f"chain {r['symbolic_chain_orders']} vs {r['concrete_chain_orders']})")
        print(f"{mismatches} mismatch(es) in {len(results)} line(s)")
    return EXIT_ORACLE if mismatches else EXIT_EQUAL


def _skip_reason(atoms, a_spec: PassiveGroupSpec, b_spec: AbelianGroupSpec,
                 budget: int) -> Optional[str]:
    if not b_spec.is_finite():
        return "active group is infinite"
    for atom in atoms:
        if atom[0] == "profile":
            return "inline profiles cannot be enumerated"
        if atom[0] == "cyclic" and atom[3].is_infinite:
            return "passive group is infinite"
    a_order = oracle.passive_order(atoms, cap=budget)
    if a_order is None:
        return f"budget exceeded (passive group alone is larger than {budget})"
    b_log2 = sum(f.copies.as_int() * f.power * math.log2(f.prime)
                 for f in b_spec.factors)
    if b_log2 > math.log2(budget) + 1:
        return f"budget exceeded (active group alone is larger than {budget})"
    b_order = b_spec.order()
    if oracle.wreath_order(a_order, b_order, cap=budget) is None:
        return f"budget exceeded ({a_order}^{b_order} * {b_order} elements)"
    return None


# ---------------------------------------------------------------------------
# demo


def _demo_decide(title: str, a1: str, a2: str, b1: str, b2: str,
                 assert_flag: bool = False) -> None:
    print(f"--- {title}")
    print(f"    A1 = {a1}   A2 = {a2}")
    print(f"    B1 = {b1}   B2 = {b2}")
    inp = DecisionInput(parse_passive(a1), parse_passive(a2),
                        parse_abelian(b1), parse_abelian(b2),
                        assert_passive_var_equal=assert_flag)
    _print_decision_text(decide_equal(inp))
    print()


def run_demo() -> int:
    print("=== primary decomposition and its invariants")
    example = "C_{3^5}^6 * C_{3^3}^{aleph_0} * C_{3^2}^5 * C_3^{aleph_1} * C_{5^3}^4 * C_{5^2}"
    run_parse(example, as_json=False)
    print()

    print("=== allowed and forbidden alterations")
    base = parse_abelian(example)
    altered = parse_abelian(
        "C_{3^5}^6 * C_{3^3}^{aleph_1} * C_{3^2}^9 * C_3^{aleph_0} * C_{5^3}^4 * C_{5^2}"
    )
    print(f"altering everything at and after the first infinite 3-factor: "
          f"equivalent = {equivalent(base, altered)}")
    for broken in (
        "C_{3^5}^7 * C_{3^3}^{aleph_0} * C_{3^2}^5 * C_3^{aleph_1} * C_{5^3}^4 * C_{5^2}",
        "C_{3^5}^6 * C_{3^3}^{aleph_0} * C_{3^2}^5 * C_3^{aleph_1} * C_{5^3}^5 * C_{5^2}",
        "C_{3^5}^6 * C_{3^3}^{aleph_0} * C_{3^2}^5 * C_3^{aleph_1} * C_{5^3}^4 * C_{5^2}^2",
    ):
        print(f"altering a protected factor: equivalent = "
              f"{equivalent(base, parse_abelian(broken))}")
    print()

    print("=== equal classes, distinct varieties (cyclic passive group)")
    for active in ("C_{3^2}^2", "C_{3^2} * C_3^4"):
        print(f"-- classify C_3 wr {active}")
        run_classify("C_3", active, as_json=False)
    _demo_decide("decide", "C_3", "C_3", "C_{3^2}^2", "C_{3^2} * C_3^4")

    print("=== equal classes, distinct varieties (D4 and Q8 passives)")
    for passive, active in (("D4", "C_{2^2}^3 * C_2"), ("Q8", "C_{2^2} * C_2^7")):
        print(f"-- classify {passive} wr {active}")
        run_classify(passive, active, as_json=False)
    _demo_decide("decide", "D4", "Q8", "C_{2^2}^3 * C_2", "C_{2^2} * C_2^7")

    print("=== infinite active groups: non-nilpotent but still separable")
    _demo_decide("decide", "D4", "Q8",
                 "C_{2^2}^3 * C_2^{aleph_0}", "C_{2^2} * C_2^{aleph_0}")

    print("=== a multi-prime pair decided prime by prime")
    passive = "D4 * Q8 * C_3 * C_5 * C_7^{aleph_1}"
    _demo_decide(
        "decide", passive, passive,
        "C_{2^5}^3 * C_{2^4}^{aleph_1} * C_2^8 * C_3^{aleph_1} * C_7^8",
        "C_{2^5}^3 * C_{2^4}^{aleph_0} * C_{2^3}^2 * C_2^9 * C_3^{aleph_0} * C_7^9",
    )
    return EXIT_EQUAL


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a pre-verb --json from being reset by the subparser default
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit JSON")
    ap = argparse.ArgumentParser(
        prog="wreathvar",
        description="Wreath products and the varieties they generate.",
        parents=[common],
    )
    ap.add_argument("--demo", action="store_true",
                    help="run the worked examples and exit")
    sub = ap.add_subparsers(dest="verb")

    p_parse = sub.add_parser("parse", parents=[common],
                             help="normalize an abelian group expression")
    p_parse.add_argument("expr")

    p_classify = sub.add_parser("classify", parents=[common],
                                help="class parameters of one wreath product")
    p_classify.add_argument("--passive", required=True)
    p_classify.add_argument("--active", required=True)

    for name, helptext in (
        ("decide", "decide whether two wreath products generate the same variety"),
        ("witness", "separation witness at one prime"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--a1", required=True)
        p.add_argument("--a2", required=True)
        p.add_argument("--b1", required=True)
        p.add_argument("--b2", required=True)
        p.add_argument("--assert-var-equal", action="store_true",
                       dest="assert_var_equal",
                       help="assert that the passive groups generate the same variety")
        if name == "witness":
            p.add_argument("--prime", type=int, required=True)

    p_verify = sub.add_parser("oracle-verify", parents=[common],
                              help="cross-check the class formula by enumeration")
    p_verify.add_argument("--manifest", required=True)
    p_verify.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    as_json = getattr(args, "json", False)
    if args.demo:
        return run_demo()
    if args.verb is None:
        ap.print_help()
        return EXIT_PARSE
    try:
        if args.verb == "parse":
            return run_parse(args.expr, as_json)
        if args.verb == "classify":
            return run_classify(args.passive, args.active, as_json)
        if args.verb == "decide":
            return run_decide(args, as_json)
        if args.verb == "witness":
            return run_witness(args, as_json)
        if args.verb == "oracle-verify":
            return run_oracle_verify(args.manifest, args.budget, as_json)
    except ParseError as err:
        return _parse_error(err)
    except NotNilpotentError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    raise AssertionError(f"unhandled verb {args.verb!r}")


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
