"""``involkit`` command-line front end.

Every command prints line-delimited JSON reports with keys ``command``,
``inputs``, ``results``, ``checks`` and ``elapsed_ms``.  Exit status: 0 all
checks pass, 1 a check failed, 2 usage or parse error, 3 cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
import time

import numpy as np

from . import _batch, _config
from .acceptance import CLAIMS, run_claim
from .canonical import rcf
from .field import FieldSpec, field_make, parse_field
from .involution import (SetId, in_set, involution_count, k_involutions_search,
                         lambda_census, lambda_member, product_sets, quadratic_block,
                         two_involutions, witness_three, witness_two,
                         witness_type1, witness_type2)
from .matrix import Matrix, conjugate, direct_sum, identity, parse_matrix, scalar
from .poly import parse_poly
from .preserver import (map_from_form, parse_form, parse_linmap, preserves_set,
                        recognize_form)

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _check(claim: str, passed: bool, evidence=None, counterexample=None) -> dict:
    return {"claim": claim, "pass": bool(passed), "evidence": evidence,
            "counterexample": counterexample}


def _field(args) -> FieldSpec:
    if not args.field:
        raise UsageError("a field is required (positional or --field)")
    spec = parse_field(args.field)
    if args.mod:
        spec = field_make(spec.p, spec.k, json.loads(args.mod))
    return spec


def _matrix(args, text: str) -> Matrix:
    if args.mod and ";mod=" not in text.split(":", 1)[0]:
        head, _, body = text.partition(":")
        text = f"{head};mod={args.mod}:{body}"
    return parse_matrix(text)


def _sets_relation(B, C, D) -> str:
    rel = lambda X, Y: "=" if X == Y else "<"
    return f"B{rel(B, C)}C{rel(C, D)}D"


# -- commands -------------------------------------------------------------------------------

def cmd_rcf(args):
    A = _matrix(args, args.matrix)
    form, conj = rcf(A)
    ok = conjugate(A, conj.P) == form.assemble()
    results = {"form": form.text(), "divisors": [str(f) for f in form.divisors],
               "conjugator": conj.P.text()}
    return {"matrix": A.text()}, results, [
        _check("conjugation-identity", ok, None if ok else "P A P^-1 != blocks",
               None if ok else A.text())]


def cmd_member(args):
    A = _matrix(args, args.matrix)
    verdict = in_set(A, SetId.parse(args.set))
    return {"set": args.set.upper(), "matrix": A.text()}, verdict.to_record(), []


def cmd_decompose(args):
    A = _matrix(args, args.matrix)
    if args.k == 2:
        verdict = in_set(A, SetId.B)
        fac = two_involutions(A) if verdict.member else None
    else:
        fac = k_involutions_search(A, args.k)
    inputs = {"k": args.k, "matrix": A.text()}
    if fac is None:
        return inputs, {"factors": None}, [
            _check("factorization-found", False, f"no product of {args.k} involutions", A.text())]
    return inputs, {"factors": [J.text() for J in fac.factors]}, [
        _check("factorization-verified", fac.verify(), len(fac.factors))]


def cmd_witness(args):
    spec = _field(args)
    inputs = {"construction": args.kind, "field": spec.header()}
    if args.kind in ("type1", "type2"):
        if not args.poly:
            raise UsageError("--poly is required")
        g = parse_poly(args.poly, spec)
        inputs["poly"] = g.text()
        N = (witness_type1 if args.kind == "type1" else witness_type2)(g)
        return inputs, {"N": N.text()}, [_check("postcondition", True)]
    if args.a1 is None or args.r is None:
        raise UsageError("--a1 and --r are required")
    a1, r = spec.parse_element(args.a1), spec.parse_element(args.r)
    inputs.update(a1=str(a1), r=str(r))
    if args.kind == "two":
        X = witness_two(a1, r)
        A = quadratic_block(a1)
    else:
        alpha = spec.parse_element(args.alpha)
        inputs["alpha"] = str(alpha)
        X = witness_three(a1, alpha, r)
        A = direct_sum(quadratic_block(a1), scalar(spec, alpha, 1))
    rAX = A.scalar_mul(r) @ X
    ok = X.trace().is_zero() and in_set(X, SetId.B).member and not in_set(rAX, SetId.B).member
    return inputs, {"X": X.text(), "rAX": rAX.text(),
                    "rAX_charpoly": rAX.charpoly().text()}, [_check("postcondition", ok)]


def cmd_enumerate(args):
    spec = _field(args)
    n = args.n
    if n is None:
        raise UsageError("n is required (positional or --n)")
    B, C, D = product_sets(spec, n)
    sets = {"B": B, "C": C, "D": D}
    wanted = "BCD" if args.set.lower() == "all" else args.set.upper()
    results = {"involutions": involution_count(spec, n)}
    results.update({s: len(sets[s]) for s in wanted})
    results.update({"B=C": B == C, "C=D": C == D, "relation": _sets_relation(B, C, D)})
    K = _batch.kernel(spec)
    X = K.all_matrices(n)
    d = K.det(X)
    det_pm1 = K.encode(X[(d == 1) | (d == spec.neg(1))])
    checks = [_check("chain", B <= C <= D),
                _check("d-equals-det-pm1", np.array_equal(D.keys, det_pm1), len(det_pm1))]
    return {"set": args.set, "field": spec.header(), "n": n}, results, checks


def cmd_preserver(args):
    text = args.target.strip()
    if text.startswith("form{"):
        form = parse_form(text)
        T = map_from_form(form)
    else:
        form, T = None, parse_linmap(text)
    inputs = {"action": args.action, "target": text}
    if args.action == "recognize":
        found = recognize_form(T)
        results = {"form": None if found is None else found.text()}
        checks = []
        if found is not None:
            checks.append(_check("roundtrip", map_from_form(found).action == T.action))
        return inputs, results, checks
    if not args.set:
        raise UsageError("preserver check needs a set (B, C or D)")
    mode, count = _parse_mode(args.mode)
    inputs.update(set=args.set.upper(), mode=args.mode, seed=args.seed)
    rep = preserves_set(T, args.set, mode=mode, count=count, seed=args.seed)
    cx = None if rep.counterexample is None else rep.counterexample.text()
    results = {"preserved": "undecided" if rep.preserved is None else rep.preserved,
               "checked": rep.checked, "counterexample": cx}
    if form is not None:
        results["form"] = form.text()
    return inputs, results, [_check("preserves", rep.preserved is not False, rep.checked, cx)]


def _parse_mode(mode: str) -> tuple[str, int]:
    if mode == "exhaustive":
        return "exhaustive", 0
    m = re.fullmatch(r"sample:(\d+)", mode)
    if not m:
        raise UsageError(f"bad --mode {mode!r}; expected exhaustive or sample:N")
    return "sample", int(m.group(1))


def cmd_lambda(args):
    spec = _field(args)
    n = args.n
    if n is None:
        raise UsageError("n is required (positional or --n)")
    inputs = {"field": spec.header(), "n": n}
    if args.member:
        verdicts = []
        for text in args.member:
            A = _matrix(args, text)
            if A.n != n or A.spec != spec:
                raise UsageError(f"{A.text()} is not a {n}x{n} matrix over {spec.header()}")
            m = lambda_member(A)
            verdicts.append({"matrix": A.text(), "member": "unknown" if m is None else m})
        inputs["members"] = [v["matrix"] for v in verdicts]
        return inputs, {"verdicts": verdicts}, []
    L = lambda_census(spec, n)
    D = product_sets(spec, n)[2]
    K = _batch.kernel(spec)
    I = identity(spec, n)
    results = {"size": len(L), "equals_D": L == D,
               "equals_pm_identity": set(L.keys.tolist()) == {I.key(), (-I).key()}}
    neg_ok = bool(L.contains_keys(K.encode(K.neg(L.stack()))).all())
    inv_ok = all(A.inverse() in L for A in L)
    return inputs, results, [_check("closed-under-negation", neg_ok),
                             _check("closed-under-inversion", inv_ok)]


COMMANDS = {"rcf": cmd_rcf, "member": cmd_member, "decompose": cmd_decompose,
            "witness": cmd_witness, "enumerate": cmd_enumerate,
            "preserver": cmd_preserver, "lambda": cmd_lambda}


# -- parser -------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", dest="field_flag", help="field, e.g. GF(5) or GF(3^2)")
    common.add_argument("--mod", help="modulus coefficients [c0,...,ck] for extension fields")
    common.add_argument("--n", dest="n_flag", type=int, help="matrix dimension")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap", type=int, help="census cap on field size (env INVOLKIT_CAP)")
    common.add_argument("--mode", default="exhaustive", help="exhaustive | sample:N")

    p = argparse.ArgumentParser(prog="involkit", parents=[common],
                                description="Products of involutions over finite fields.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("rcf", parents=[common], help="canonical form with conjugator")
    s.add_argument("matrix")
    s = sub.add_parser("member", parents=[common], help="membership in B, C or D")
    s.add_argument("set", choices=["B", "C", "D", "b", "c", "d"])
    s.add_argument("matrix")
    s = sub.add_parser("decompose", parents=[common], help="product of k involutions")
    s.add_argument("k", type=int, choices=[2, 3, 4])
    s.add_argument("matrix")
    s = sub.add_parser("witness", parents=[common], help="membership-breaking witnesses")
    s.add_argument("kind", choices=["type1", "type2", "two", "three"])
    s.add_argument("--poly")
    s.add_argument("--a1")
    s.add_argument("--r")
    s.add_argument("--alpha", default="1")
    s = sub.add_parser("enumerate", parents=[common], help="exact product-closure census")
    s.add_argument("set", choices=["all", "B", "C", "D", "b", "c", "d"])
    s.add_argument("field", nargs="?")
    s.add_argument("n", nargs="?", type=int)
    s = sub.add_parser("preserver", parents=[common], help="check or recognize linear preservers")
    s.add_argument("action", choices=["check", "recognize"])
    s.add_argument("target", help="form{...} or linmap{...}")
    s.add_argument("set", nargs="?")
    s.add_argument("mode_pos", nargs="?", metavar="mode")
    s = sub.add_parser("lambda", parents=[common], help="left multipliers of C")
    s.add_argument("field", nargs="?")
    s.add_argument("n", nargs="?", type=int)
    s.add_argument("--member", action="append", help="matrix to test (repeatable)")
    s = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    s.add_argument("suite", help="all or a claim id: " + ", ".join(CLAIMS))
    return p


def _normalize(args) -> None:
    if getattr(args, "field", None) is None:
        args.field = args.field_flag
    if getattr(args, "n", None) is None:
        args.n = args.n_flag
    if getattr(args, "mode_pos", None):
        args.mode = args.mode_pos


def _emit(report: dict, out) -> None:
    out.write(json.dumps(report, default=str) + "\n")
    out.flush()


def _report(command, inputs, results, checks, start) -> dict:
    return {"command": command, "inputs": inputs, "results": results, "checks": checks,
            "elapsed_ms": round((time.perf_counter() - start) * 1000, 3)}


def _verify(args, out) -> int:
    if args.suite != "all" and args.suite not in CLAIMS:
        raise UsageError(f"unknown claim {args.suite!r}; known: {', '.join(CLAIMS)}")
    ids = list(CLAIMS) if args.suite == "all" else [args.suite]
    failed = 0
    for cid in ids:
        start = time.perf_counter()
        res = run_claim(cid, args.seed)
        failed += not res.passed
        _emit(_report("verify", {"claim": cid, "seed": args.seed}, {"title": res.title},
                      [res.to_record()], start), out)
    return EXIT_CHECK if failed else EXIT_OK


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    _normalize(args)
    if args.cap is not None:
        previous = _config.set_census_cap(args.cap)
    start = time.perf_counter()
    try:
        if args.command == "verify":
            return _verify(args, out)
        inputs, results, checks = COMMANDS[args.command](args)
        _emit(_report(args.command, inputs, results, checks, start), out)
        return EXIT_OK if all(c["pass"] for c in checks) else EXIT_CHECK
    except _config.CapExceededError as exc:
        _emit(_report(args.command, {}, {"error": "cap exceeded", "detail": str(exc)}, [], start), out)
        return EXIT_CAP
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        _emit(_report(args.command, {}, {"error": "usage", "detail": str(exc)}, [], start), out)
        return EXIT_USAGE
    except RuntimeError as exc:
        _emit(_report(args.command, {}, {"error": "check failed", "detail": str(exc)},
                      [_check("postcondition", False, str(exc), "see detail")], start), out)
        return EXIT_CHECK
    finally:
        if args.cap is not None:
            _config.set_census_cap(previous)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
