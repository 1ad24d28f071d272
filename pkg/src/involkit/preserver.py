"""Linear maps on M_n(GF(q)) and the standard preserver forms.

A map is stored through its action on column-major vectorizations:
``vec(X)[i + n*j] = X[i, j]`` and ``vec(T(X)) = action @ vec(X)``.

Standard forms:

* conjugation:      ``X -> alpha P X P^{-1}``  (or with ``X^t``), ``alpha^2 = 1``
* congruence-pair:  ``X -> P X Q``             (or with ``X^t``)
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass

import numpy as np

from . import _batch
from .field import FieldElement, FieldSpec, parse_field
from .involution import SetId, bfs_set, in_set, is_nilpotent
from .matrix import Matrix, SingularMatrixError, identity, parse_matrix, unit_matrix


def vec(X: Matrix) -> list[int]:
    n = X.n
    return [X.rows[i][j] for j in range(n) for i in range(n)]


def unvec(spec: FieldSpec, v, n: int) -> Matrix:
    return Matrix._raw(spec, [[v[i + n * j] for j in range(n)] for i in range(n)])


@dataclass(frozen=True)
class LinearMapOnMatrices:
    spec: FieldSpec
    n: int
    action: Matrix

    def __post_init__(self):
        if self.action.n != self.n * self.n or self.action.spec != self.spec:
            raise ValueError("action must be an n^2 x n^2 matrix over the same field")

    def apply(self, X: Matrix) -> Matrix:
        if X.n != self.n or X.spec != self.spec:
            raise ValueError("argument does not live in M_n over this field")
        s = self.spec
        v = vec(X)
        out = []
        for row in self.action.rows:
            acc = 0
            for a, x in zip(row, v):
                if a and x:
                    acc = s.add(acc, s.mul(a, x))
            out.append(acc)
        return unvec(s, out, self.n)

    __call__ = apply

    def is_unital(self) -> bool:
        return self.apply(identity(self.spec, self.n)) == identity(self.spec, self.n)

    def is_bijective(self) -> bool:
        return self.action.is_invertible()

    def compose(self, other: "LinearMapOnMatrices") -> "LinearMapOnMatrices":
        """``self o other``."""
        return LinearMapOnMatrices(self.spec, self.n, self.action @ other.action)

    def apply_batch(self, X: np.ndarray) -> np.ndarray:
        """Images of a stack ``(m, n, n)`` of code arrays."""
        K = _batch.kernel(self.spec)
        n = self.n
        m = X.shape[0]
        V = X.transpose(0, 2, 1).reshape(m, 1, n * n)
        At = np.array(self.action.rows, dtype=np.int64).T
        W = K.matmul(V, At).reshape(m, n, n)
        return W.transpose(0, 2, 1)

    def text(self) -> str:
        body = self.action.text().split(":", 1)[1]
        return f"linmap{{{self.spec.header()}, {self.n}, action={body}}}"


_LINMAP = re.compile(r"^\s*linmap\{\s*(GF\([^)]*\)(?:;mod=\[[^\]]*\])?)\s*,\s*(\d+)\s*,\s*action\s*=\s*(\[.*\])\s*\}\s*$", re.S)


def parse_linmap(text: str) -> LinearMapOnMatrices:
    m = _LINMAP.match(text)
    if not m:
        raise ValueError(f"bad linmap text {text!r}")
    spec = parse_field(m.group(1))
    rows = json.loads(m.group(3))
    return LinearMapOnMatrices(spec, int(m.group(2)),
                               Matrix(spec, [[spec.element(x) for x in r] for r in rows]))


@dataclass(frozen=True)
class PreserverForm:
    variant: str  # "conjugation" or "congruence-pair"
    P: Matrix
    Q: Matrix | None = None
    alpha: FieldElement | None = None
    transpose: bool = False

    def __post_init__(self):
        if self.variant not in ("conjugation", "congruence-pair"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant == "conjugation":
            if self.alpha is None:
                object.__setattr__(self, "alpha", self.P.spec.one)
            if self.alpha * self.alpha != 1:
                raise ValueError("alpha must satisfy alpha^2 = 1")
        elif self.Q is None:
            raise ValueError("congruence-pair form needs Q")

    @property
    def spec(self) -> FieldSpec:
        return self.P.spec

    @property
    def n(self) -> int:
        return self.P.n

    def right_factor(self) -> Matrix:
        """Q for a pair form; ``alpha P^{-1}`` for a conjugation."""
        if self.variant == "conjugation":
            return self.P.inverse().scalar_mul(self.alpha)
        return self.Q

    def __call__(self, X: Matrix) -> Matrix:
        Y = X.transpose() if self.transpose else X
        return self.P @ Y @ self.right_factor()

    def text(self) -> str:
        alpha = "none" if self.alpha is None else str(self.alpha)
        Q = "none" if self.Q is None else self.Q.text()
        return (f"form{{variant={self.variant}, alpha={alpha}, P={self.P.text()}, "
                f"Q={Q}, transpose={'true' if self.transpose else 'false'}}}")


def parse_form(text: str) -> PreserverForm:
    text = text.strip()
    if not (text.startswith("form{") and text.endswith("}")):
        raise ValueError(f"bad form text {text!r}")
    parts = re.split(r",\s*(?=(?:variant|alpha|P|Q|transpose)\s*=)", text[5:-1])
    fields = {}
    for part in parts:
        key, _, value = part.partition("=")
        fields[key.strip()] = value.strip()
    P = parse_matrix(fields["P"])
    Q = None if fields.get("Q", "none") == "none" else parse_matrix(fields["Q"])
    alpha = None if fields.get("alpha", "none") == "none" else P.spec.parse_element(fields["alpha"])
    return PreserverForm(fields["variant"], P, Q, alpha,
                         fields.get("transpose", "false").lower() == "true")


def conjugation_form(P: Matrix, alpha=1, transpose: bool = False) -> PreserverForm:
    return PreserverForm("conjugation", P, None, P.spec.element(alpha), transpose)


def pair_form(P: Matrix, Q: Matrix, transpose: bool = False) -> PreserverForm:
    return PreserverForm("congruence-pair", P, Q, None, transpose)


def map_from_closed_form(spec: FieldSpec, n: int, fn) -> LinearMapOnMatrices:
    """Tabulate a linear ``fn`` on the E_{i,j} basis."""
    cols = []
    for j in range(n):
        for i in range(n):
            cols.append(vec(fn(unit_matrix(spec, i + 1, j + 1, n))))
    return LinearMapOnMatrices(spec, n, Matrix._raw(spec, [list(r) for r in zip(*cols)]))


def map_from_form(form: PreserverForm) -> LinearMapOnMatrices:
    if not form.P.is_invertible():
        raise SingularMatrixError("P must be invertible")
    if form.Q is not None and not form.Q.is_invertible():
        raise SingularMatrixError("Q must be invertible")
    return map_from_closed_form(form.spec, form.n, form)


def transpose_map(spec: FieldSpec, n: int) -> LinearMapOnMatrices:
    return map_from_closed_form(spec, n, lambda X: X.transpose())


# -- set preservation ------------------------------------------------------------------

@dataclass(frozen=True)
class PreservationReport:
    preserved: bool | None
    counterexample: Matrix | None
    checked: int

    def __bool__(self):
        if self.preserved is None:
            raise ValueError("preservation undecided: no sampled image could be classified")
        return self.preserved


def preserves_set(T: LinearMapOnMatrices, which: SetId | str, mode="exhaustive",
                  count: int = 200, seed: int = 0) -> PreservationReport:
    """Check ``T(S) <= S``.

    ``mode="exhaustive"`` scans the whole enumerated set (identity first);
    ``mode="sample"`` draws ``count`` seeded random members of S (products of
    random involutions) and checks their images with the characterized tests;
    images whose membership is undecidable within the caps are skipped.
    """
    if isinstance(which, str):
        which = SetId.parse(which)
    spec, n = T.spec, T.n
    if mode == "exhaustive":
        S = bfs_set(spec, n, which)
        K = _batch.kernel(spec)
        X = S.stack()
        eye_key = identity(spec, n).key()
        order = np.argsort(S.keys != eye_key, kind="stable")
        X = X[order]
        images = K.encode(T.apply_batch(X))
        ok = S.contains_keys(images)
        if ok.all():
            return PreservationReport(True, None, len(X))
        bad = int(np.argmin(ok))
        return PreservationReport(False, Matrix._raw(spec, X[bad].tolist()), bad + 1)
    if mode != "sample":
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    checked = 0
    for _ in range(count):
        X = identity(spec, n)
        for _ in range(which.arity):
            X = X @ random_involution(spec, n, rng)
        image = in_set(T.apply(X), which).member
        if image is None:
            continue
        checked += 1
        if not image:
            return PreservationReport(False, X, checked)
    return PreservationReport(True if checked else None, None, checked)


# -- recognition -------------------------------------------------------------------------

def _basis_images(T: LinearMapOnMatrices) -> list[list[Matrix]]:
    n, s = T.n, T.spec
    cols = list(zip(*T.action.rows))
    return [[unvec(s, cols[i + n * j], n) for j in range(n)] for i in range(n)]


def _recognize_plain(T: LinearMapOnMatrices) -> tuple[Matrix, Matrix] | None:
    """``(P, Q)`` with ``T(X) = P X Q``, or ``None``."""
    s, n = T.spec, T.n
    M = _basis_images(T)
    if any(M[i][j].rank() != 1 for i in range(n) for j in range(n)):
        return None
    # M[i][j] = p_i q_j^t, where p_i is column i of P and q_j is row j of Q
    c = next(c for c in range(n) if any(M[0][0].rows[r][c] for r in range(n)))
    pcols = [[M[i][0].rows[r][c] for r in range(n)] for i in range(n)]
    r0 = next(r for r in range(n) if pcols[0][r])
    scale = s.inv(pcols[0][r0])
    qrows = [[s.mul(x, scale) for x in M[0][j].rows[r0]] for j in range(n)]
    P = Matrix._raw(s, [list(r) for r in zip(*pcols)])
    Q = Matrix._raw(s, qrows)
    if not (P.is_invertible() and Q.is_invertible()):
        return None
    # gauge: first nonzero entry of P (row-major) is 1
    lead = next(x for row in P.rows for x in row if x)
    P = P.scalar_mul(FieldElement(s, s.inv(lead)))
    Q = Q.scalar_mul(FieldElement(s, lead))
    if map_from_closed_form(s, n, lambda X: P @ X @ Q).action != T.action:
        return None
    return P, Q


def recognize_form(T: LinearMapOnMatrices) -> PreserverForm | None:
    """Recover a standard form from a raw map, or ``None`` if it has none.

    Pairs with ``P Q = alpha I``, ``alpha^2 = 1``, are reported as conjugations.
    """
    for flag in (False, True):
        U = T.compose(transpose_map(T.spec, T.n)) if flag else T
        found = _recognize_plain(U)
        if found is None:
            continue
        P, Q = found
        PQ = P @ Q
        if PQ.is_scalar():
            alpha = PQ[0, 0]
            if alpha * alpha == 1:
                return PreserverForm("conjugation", P, None, alpha, flag)
        return PreserverForm("congruence-pair", P, Q, None, flag)
    return None


# -- other checks --------------------------------------------------------------------------

def nilpotent_spanning_set(spec: FieldSpec, n: int) -> list[Matrix]:
    """Nilpotent matrices spanning the trace-zero subspace."""
    out = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                out.append(unit_matrix(spec, i, j, n))
    for i in range(1, n):
        out.append(unit_matrix(spec, i, i, n) - unit_matrix(spec, i + 1, i + 1, n)
                   + unit_matrix(spec, i, i + 1, n) - unit_matrix(spec, i + 1, i, n))
    return out


def random_invertible(spec: FieldSpec, n: int, rng: np.random.Generator) -> Matrix:
    while True:
        M = Matrix._raw(spec, rng.integers(0, spec.q, size=(n, n)).tolist())
        if M.is_invertible():
            return M


def random_involution(spec: FieldSpec, n: int, rng: np.random.Generator) -> Matrix:
    """A random conjugate of a random involution in normal form."""
    rows = [[0] * n for _ in range(n)]
    if spec.p == 2:
        blocks = int(rng.integers(0, n // 2 + 1))
        for i in range(n):
            rows[i][i] = 1
        for b in range(blocks):
            rows[2 * b][2 * b + 1] = 1
    else:
        for i in range(n):
            rows[i][i] = spec.neg(1) if rng.integers(0, 2) else 1
    P = random_invertible(spec, n, rng)
    return P @ Matrix._raw(spec, rows) @ P.inverse()


def random_nilpotent(spec: FieldSpec, n: int, rng: np.random.Generator) -> Matrix:
    U = [[int(rng.integers(0, spec.q)) if j > i else 0 for j in range(n)] for i in range(n)]
    P = random_invertible(spec, n, rng)
    return P @ Matrix._raw(spec, U) @ P.inverse()


def nilpotent_pullback_check(T: LinearMapOnMatrices, samples: int = 50, seed: int = 0) -> bool:
    """``T(I)^{-1} T(N)`` nilpotent on a spanning set plus random nilpotents."""
    spec, n = T.spec, T.n
    A = T.apply(identity(spec, n))
    if not A.is_invertible():
        raise SingularMatrixError("T(I) is singular")
    Ainv = A.inverse()
    rng = np.random.default_rng(seed)
    probes = nilpotent_spanning_set(spec, n)
    probes += [random_nilpotent(spec, n, rng) for _ in range(samples)]
    return all(is_nilpotent(Ainv @ T.apply(N)) for N in probes)


def exceptional_n2_map(spec: FieldSpec) -> LinearMapOnMatrices:
    """``X -> -X + tr(X) I`` on M_2, a unital preserver with negative trace-zero part."""
    if spec.p == 2:
        raise ValueError("needs characteristic != 2")
    I = identity(spec, 2)
    return map_from_closed_form(spec, 2, lambda X: -X + I.scalar_mul(X.trace()))


def random_conjugation_form(spec: FieldSpec, n: int, rng: np.random.Generator,
                            alpha=None) -> PreserverForm:
    if alpha is None:
        alpha = 1 if spec.p == 2 or rng.integers(0, 2) == 0 else -1
    return conjugation_form(random_invertible(spec, n, rng), alpha,
                            bool(rng.integers(0, 2)))


def random_pair_form(spec: FieldSpec, n: int, rng: np.random.Generator,
                     det_product=None) -> PreserverForm:
    """Random ``P, Q``; with ``det_product`` set, ``det(PQ)`` is forced to it."""
    P = random_invertible(spec, n, rng)
    Q = random_invertible(spec, n, rng)
    if det_product is not None:
        c = spec.element(det_product) / (P @ Q).det()
        rows = [list(r) for r in Q.rows]
        rows[0] = [spec.mul(c.code, x) for x in rows[0]]
        Q = Matrix._raw(spec, rows)
    return pair_form(P, Q, bool(rng.integers(0, 2)))
