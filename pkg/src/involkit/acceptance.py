"""Acceptance suite: each claim is an exact, exhaustive or seeded check.

Claims are registered under short descriptive ids and shared by the
``verify`` command and the test-suite.  A claim returns a ``CheckResult``;
failures carry a serialized counterexample.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable

import numpy as np

from . import _batch
from .canonical import similar, similar_to_inverse
from .field import GF, FieldSpec
from .involution import (SetId, c_equals_d, enumerate_involutions, in_B, in_C, in_D,
                         is_involution, is_nilpotent, k_involutions_search, lambda_census,
                         pencil_det, product_sets, quadratic_block, two_involutions,
                         witness_three, witness_two, witness_type1, witness_type2)
from .matrix import Matrix, companion, direct_sum, identity, scalar, unit_matrix, zero
from .poly import Polynomial, power_of_self_reciprocal_irreducible, reciprocal
from .preserver import (exceptional_n2_map, map_from_form, preserves_set,
                        random_conjugation_form, random_pair_form, recognize_form)


@dataclass
class CheckResult:
    claim: str
    title: str
    passed: bool
    evidence: dict = field(default_factory=dict)
    counterexample: str | None = None

    def to_record(self) -> dict:
        return {"claim": self.claim, "pass": self.passed, "evidence": self.evidence,
                "counterexample": self.counterexample}

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" counterexample={self.counterexample}" if self.counterexample else ""
        return f"[{status}] {self.claim}: {self.title}{extra}"


class _Fail(Exception):
    def __init__(self, what: str, witness, evidence: dict | None = None):
        super().__init__(what)
        self.witness = witness
        self.evidence = evidence or {}


def _require(cond: bool, what: str, witness=None) -> None:
    if not cond:
        raise _Fail(what, witness)


def _matrices(spec: FieldSpec, n: int):
    K = _batch.kernel(spec)
    X = K.all_matrices(n)
    return X, K


def _mat(spec: FieldSpec, rows) -> Matrix:
    return Matrix._raw(spec, rows.tolist() if isinstance(rows, np.ndarray) else rows)


def _det_pm1_keys(spec: FieldSpec, n: int) -> np.ndarray:
    X, K = _matrices(spec, n)
    d = K.det(X)
    ok = (d == 1) | (d == spec.neg(1))
    return K.encode(X[ok])


# -- claims ------------------------------------------------------------------------------

def _char2_n2_collapse(rng) -> dict:
    ev = {}
    for q in (2, 4):
        F = GF(q)
        B, C, D = product_sets(F, 2)
        _require(B == C == D, f"B, C, D differ over GF({q})")
        _require(np.array_equal(D.keys, _det_pm1_keys(F, 2)), f"D != det^2=1 over GF({q})")
        ev[f"GF({q})"] = len(B)
    return ev


def _c_equals_d(rng) -> dict:
    ev = {}
    for q, n in ((2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)):
        F = GF(q)
        _, C, D = product_sets(F, n)
        _require(c_equals_d(F, n), f"characterization disagrees at GF({q}), n={n}")
        _require(C == D, f"C != D over GF({q}), n={n}")
        _require(np.array_equal(D.keys, _det_pm1_keys(F, n)), f"D != det^2=1 over GF({q}), n={n}")
        ev[f"GF({q}),n={n}"] = len(C)
    return ev


def _b3_char2(rng) -> dict:
    F = GF(2)
    reps = [identity(F, 3), Matrix(F, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])]
    reps += [Matrix(F, [[0, 0, 1], [1, 0, a], [0, 1, a]]) for a in (0, 1)]
    B, C, _ = product_sets(F, 3)
    X, K = _matrices(F, 3)
    for rows in X:
        A = _mat(F, rows)
        if not A.is_invertible():
            continue
        via_pairing = in_B(A).member
        via_classes = any(similar(A, R) for R in reps)
        _require(via_pairing == via_classes == (A in B), "B_3 descriptions disagree", A)
    odd = Matrix(F, [[0, 0, 1], [1, 0, 0], [0, 1, 1]])
    _require(not in_B(odd).member and odd not in B, "displayed matrix found in B", odd)
    _require(odd in C, "displayed matrix missing from C", odd)
    return {"B": len(B), "C": len(C)}


def _b_triple_agreement(rng) -> dict:
    ev = {}
    for q, n in ((2, 2), (2, 3), (3, 2), (3, 3)):
        F = GF(q)
        B = product_sets(F, n)[0]
        X, K = _matrices(F, n)
        X = X[K.det(X) != 0]
        hits = 0
        for rows, inside in zip(X, B.contains_keys(K.encode(X))):
            A = _mat(F, rows)
            a, b = in_B(A).member, similar_to_inverse(A)
            _require(a == b == bool(inside), "in_B / similar_to_inverse / bfs disagree", A)
            hits += a
        ev[f"GF({q}),n={n}"] = f"{hits}/{len(X)}"
    return ev


def _two_involutions_sound(rng) -> dict:
    ev = {}
    for q, n in product((2, 3), (1, 2, 3)):
        F = GF(q)
        B = product_sets(F, n)[0]
        for A in B:
            try:
                fac = two_involutions(A)
            except (ValueError, RuntimeError) as exc:
                raise _Fail(f"two_involutions raised {exc}", A)
            J1, J2 = fac.factors
            _require(is_involution(J1) and is_involution(J2) and J1 @ J2 == A,
                     "factorization does not verify", A)
        ev[f"GF({q}),n={n}"] = len(B)
    return ev


def _det_four_involutions(rng) -> dict:
    F = GF(3)
    D = product_sets(F, 2)[2]
    X, _ = _matrices(F, 2)
    found = 0
    for rows in X:
        A = _mat(F, rows)
        fac = k_involutions_search(A, 4)
        d = A.det()
        if d * d == 1:
            _require(fac is not None and len(fac.factors) == 4 and fac.verify(),
                     "no verified certificate for a det +-1 matrix", A)
            found += 1
        else:
            _require(fac is None and A not in D, "certificate for det outside +-1", A)
    return {"certified": found, "scanned": len(X)}


def _scalar_c3_exclusion(rng) -> dict:
    F = GF(7)
    A = scalar(F, 2, 3)
    _require(in_D(A).member, "2I not in D_3", A)
    _require(in_C(A).member is False, "characterized test places 2I in C_3", A)
    invs = enumerate_involutions(F, 3)
    _require(k_involutions_search(A, 3) is None, "found 3-involution product for 2I", A)
    four = k_involutions_search(A, 4)
    _require(four is not None and four.verify(), "no 4-involution certificate for 2I", A)
    return {"involutions_scanned": len(invs)}


def _witness_sweeps(rng) -> dict:
    ev = {"two": 0, "three": 0, "type1": 0, "type2": 0}
    broken = []
    for q in (5, 7):
        F = GF(q)
        B2 = product_sets(F, 2)[0] if q == 5 else None
        for a1, r in product(F.enumerate_all(), F.enumerate_all()[1:]):
            X = witness_two(a1, r)
            R = quadratic_block(a1).scalar_mul(r) @ X
            _require(X.trace().is_zero() and similar_to_inverse(X), "witness_two X not in B", X)
            _require(not similar_to_inverse(R), "witness_two r A X in B", X)
            if B2 is not None:
                _require(X in B2 and R not in B2, "bfs oracle rejects witness_two", X)
            ev["two"] += 1
            for alpha in (1, -1):
                X = witness_three(a1, alpha, r)
                A = direct_sum(quadratic_block(a1), scalar(F, alpha, 1))
                _require(X.trace().is_zero() and similar_to_inverse(X), "witness_three X not in B", X)
                _require(not similar_to_inverse(A.scalar_mul(r) @ X), "witness_three r A X in B", X)
                ev["three"] += 1
        for deg in (2, 3):
            for tail in product(range(q), repeat=deg):
                if tail[0] == 0:
                    continue
                f = Polynomial(F, list(tail) + [1])
                if power_of_self_reciprocal_irreducible(f):
                    if deg < 3:
                        continue
                    N = witness_type1(f)
                    M = companion(f) @ (identity(F, deg) + N)
                    _require(not similar_to_inverse(M), "type1 product in B", M)
                    ev["type1"] += 1
                else:
                    # checked independently of witness_type2's own postcondition,
                    # so every failing g in the sweep is collected
                    A = direct_sum(companion(f), companion(reciprocal(f)))
                    _require(similar_to_inverse(A), "C_g + C_g~ not in B", A)
                    N = direct_sum(zero(F, deg), unit_matrix(F, 1, deg, deg))
                    M = A @ (identity(F, 2 * deg) + N)
                    if similar_to_inverse(M):
                        broken.append((f"GF({q})", str(f), M))
                    else:
                        _require(witness_type2(f) == N, "witness_type2 returned another N", f)
                        ev["type2"] += 1
    if broken:
        ev["type2_failures"] = [f"{field_}: g={g}" for field_, g, _ in broken]
        raise _Fail("A(I+N) stays in B for admissible g", broken[0][2], ev)
    return ev


def _nilpotency_criterion(rng) -> dict:
    ev = {}
    for q, n in product((2, 3), (2, 3)):
        F = GF(q)
        X, K = _matrices(F, n)
        P = X
        for _ in range(n - 1):
            P = K.matmul(P, X)
        power_zero = ~P.reshape(len(X), -1).any(axis=1)
        one = Polynomial(F, [1])
        count = 0
        for rows, z in zip(X, power_zero):
            N = _mat(F, rows)
            a, c = is_nilpotent(N), pencil_det(N) == one
            _require(a == bool(z) == c, "nilpotency tests disagree", N)
            count += a
        ev[f"GF({q}),n={n}"] = count
    return ev


def _sufficiency(rng) -> dict:
    ev = {}
    F = GF(3)
    for n in (2, 3):
        for _ in range(100):
            f = random_conjugation_form(F, n, rng)
            r = preserves_set(map_from_form(f), SetId.B)
            _require(r.preserved, f"{f.text()} fails B", r.counterexample)
            f = random_conjugation_form(F, n, rng, alpha=1)
            r = preserves_set(map_from_form(f), SetId.C)
            _require(r.preserved, f"{f.text()} fails C", r.counterexample)
            f = random_pair_form(F, n, rng, det_product=int(rng.choice([1, -1])))
            r = preserves_set(map_from_form(f), SetId.D)
            _require(r.preserved, f"{f.text()} fails D", r.counterexample)
        ev[f"GF(3),n={n}"] = 300
    for q, n in ((2, 2), (4, 2), (2, 3)):
        F = GF(q)
        checks = 0
        for _ in range(100):
            pair = map_from_form(random_pair_form(F, n, rng, det_product=1))
            conj = map_from_form(random_conjugation_form(F, n, rng))
            targets = [(pair, s) for s in SetId] if n == 2 else [
                (conj, SetId.B), (pair, SetId.C), (pair, SetId.D)]
            for T, s in targets:
                r = preserves_set(T, s)
                _require(r.preserved, f"{T.text()} fails {s.name}", r.counterexample)
                checks += 1
        ev[f"GF({q}),n={n}"] = checks
    return ev


def _exceptional_map(rng) -> dict:
    ev = {}
    for q in (3, 5):
        F = GF(q)
        T = exceptional_n2_map(F)
        _require(T.is_unital(), "not unital")
        X, K = _matrices(F, 2)
        _require(np.array_equal(K.det(T.apply_batch(X)), K.det(X)), "determinant not preserved")
        for s in SetId:
            r = preserves_set(T, s)
            _require(r.preserved, f"fails {s.name}", r.counterexample)
        form = recognize_form(T)
        Q0 = Matrix(F, [[0, 1], [-1, 0]])
        _require(form is not None and form.variant == "conjugation" and form.transpose
                 and form.P == Q0 and form.alpha == 1, "recognition did not return Q0 X^t Q0^-1")
        ev[f"GF({q})"] = form.text()
    return ev


def _lambda_structure(rng) -> dict:
    ev = {}
    for q in (2, 3):
        F = GF(q)
        L = lambda_census(F, 3)
        D = product_sets(F, 3)[2]
        _require(L == D, f"census differs from D over GF({q})")
        K = _batch.kernel(F)
        _require(L.contains_keys(K.encode(K.neg(L.stack()))).all(), "not closed under negation")
        for A in L:
            _require(A.inverse() in L, "not closed under inversion", A)
        ev[f"GF({q})"] = len(L)
    return ev


def _recognition_roundtrip(rng) -> dict:
    F = GF(5)
    for i in range(500):
        n = 1 + i % 3
        f = random_pair_form(F, n, rng)
        T = map_from_form(f)
        g = recognize_form(T)
        _require(g is not None, f"{f.text()} unrecognized")
        _require(map_from_form(g).action == T.action, f"{f.text()} recovered as {g.text()}")
    return {"forms": 500}


@dataclass(frozen=True)
class Claim:
    id: str
    title: str
    run: Callable


CLAIMS = {c.id: c for c in (
    Claim("char2-n2-collapse", "B=C=D={det^2=1} for n=2 over GF(2), GF(4)", _char2_n2_collapse),
    Claim("c-equals-d", "C=D by product closure in the characterized cases", _c_equals_d),
    Claim("b3-char2", "B_3 over GF(2): pairing = class list = product closure", _b3_char2),
    Claim("b-triple-agreement", "pairing test = similar to inverse = product closure", _b_triple_agreement),
    Claim("two-involutions-sound", "two_involutions verifies on every element of B", _two_involutions_sound),
    Claim("det-four-involutions", "det +-1 <=> certified product of four involutions, GF(3) n=2", _det_four_involutions),
    Claim("scalar-c3-exclusion", "2I_3 over GF(7) lies in D_3 but not C_3", _scalar_c3_exclusion),
    Claim("witness-sweeps", "witness constructions break membership in B", _witness_sweeps),
    Claim("nilpotency-criterion", "charpoly = x^n <=> N^n = 0 <=> det(I+tN) = 1", _nilpotency_criterion),
    Claim("sufficiency", "standard forms preserve their sets exhaustively", _sufficiency),
    Claim("exceptional-map", "X -> -X + tr(X) I: unital, det- and set-preserving, recognized", _exceptional_map),
    Claim("lambda-structure", "left multipliers of C equal D and are closed under -A, A^-1", _lambda_structure),
    Claim("recognition-roundtrip", "recognize_form o map_from_form reproduces the action", _recognition_roundtrip),
)}


def run_claim(claim_id: str, seed: int = 0) -> CheckResult:
    try:
        claim = CLAIMS[claim_id]
    except KeyError:
        raise KeyError(f"unknown claim {claim_id!r}; known: {', '.join(CLAIMS)}") from None
    rng = np.random.default_rng(seed)
    try:
        evidence = claim.run(rng)
    except _Fail as exc:
        w = exc.witness
        cx = w.text() if hasattr(w, "text") else (None if w is None else str(w))
        return CheckResult(claim.id, claim.title, False, {**exc.evidence, "failure": str(exc)}, cx)
    except (RuntimeError, ValueError, ArithmeticError) as exc:
        return CheckResult(claim.id, claim.title, False,
                           {"failure": f"{type(exc).__name__}: {exc}"}, "see failure")
    return CheckResult(claim.id, claim.title, True, evidence)


def run_all(seed: int = 0) -> list[CheckResult]:
    return [run_claim(cid, seed) for cid in CLAIMS]
