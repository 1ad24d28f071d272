"""Dense square matrices over GF(q).

``Matrix`` is an immutable value holding field codes row by row.  The
constructors mirror the usual notation: ``companion(f)``, ``tau(spec, n)``,
``unit_matrix(spec, i, j, n)`` (1-based, like E_{i,j}), ``direct_sum``.
"""
from __future__ import annotations

import json
import re
from typing import Iterable, Sequence

from . import _linalg
from .field import FieldElement, FieldMismatchError, FieldSpec, parse_field
from .poly import Polynomial

MAX_DIM = 64


class SingularMatrixError(ValueError):
    """Raised when an inverse is requested for a singular matrix."""


class Matrix:
    __slots__ = ("spec", "n", "rows", "_key")

    def __init__(self, spec: FieldSpec, rows: Sequence[Sequence]):
        n = len(rows)
        if n < 1 or n > MAX_DIM:
            raise ValueError(f"dimension must be in 1..{MAX_DIM}")
        codes = []
        for r in rows:
            if len(r) != n:
                raise ValueError("matrix must be square")
            codes.append(tuple(spec.element(x).code for x in r))
        self.spec = spec
        self.n = n
        self.rows = tuple(codes)
        self._key = None

    @classmethod
    def _raw(cls, spec: FieldSpec, rows) -> "Matrix":
        obj = cls.__new__(cls)
        obj.spec = spec
        obj.n = len(rows)
        obj.rows = tuple(tuple(r) for r in rows)
        obj._key = None
        return obj

    # -- access -------------------------------------------------------------------
    def __getitem__(self, ij) -> FieldElement:
        i, j = ij
        return FieldElement(self.spec, self.rows[i][j])

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def key(self) -> int:
        """Row-major base-q integer encoding; matches the batch kernels."""
        if self._key is None:
            q = self.spec.q
            k = 0
            for r in reversed(self.rows):
                for c in reversed(r):
                    k = k * q + c
            self._key = k
        return self._key

    @classmethod
    def from_key(cls, spec: FieldSpec, n: int, key: int) -> "Matrix":
        q = spec.q
        flat = []
        for _ in range(n * n):
            key, c = divmod(key, q)
            flat.append(c)
        return cls._raw(spec, [flat[i * n:(i + 1) * n] for i in range(n)])

    def _check(self, other: "Matrix") -> None:
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.spec != self.spec:
            raise FieldMismatchError(f"cannot mix {self.spec} and {other.spec} matrices")
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    # -- ring structure -----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.spec == other.spec and self.rows == other.rows

    def __hash__(self):
        return hash((self.spec, self.rows))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        add = self.spec.add
        return Matrix._raw(self.spec, [[add(x, y) for x, y in zip(r, s)]
                                       for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        sub = self.spec.sub
        return Matrix._raw(self.spec, [[sub(x, y) for x, y in zip(r, s)]
                                       for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "Matrix":
        neg = self.spec.neg
        return Matrix._raw(self.spec, [[neg(x) for x in r] for r in self.rows])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix._raw(self.spec, _linalg.matmul(self.spec, self.rows, other.rows))

    def scalar_mul(self, c) -> "Matrix":
        code = self.spec.element(c).code
        mul = self.spec.mul
        return Matrix._raw(self.spec, [[mul(code, x) for x in r] for r in self.rows])

    def __mul__(self, c):
        if isinstance(c, Matrix):
            return self @ c
        return self.scalar_mul(c)

    def __rmul__(self, c):
        return self.scalar_mul(c)

    def __pow__(self, e: int) -> "Matrix":
        if e < 0:
            return self.inverse() ** (-e)
        result = identity(self.spec, self.n)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def transpose(self) -> "Matrix":
        return Matrix._raw(self.spec, list(zip(*self.rows)))

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def trace(self) -> FieldElement:
        acc = 0
        for i in range(self.n):
            acc = self.spec.add(acc, self.rows[i][i])
        return FieldElement(self.spec, acc)

    def is_scalar(self) -> bool:
        c = self.rows[0][0]
        return all(self.rows[i][j] == (c if i == j else 0)
                   for i in range(self.n) for j in range(self.n))

    # -- elimination kernels ------------------------------------------------------
    def det(self) -> FieldElement:
        return FieldElement(self.spec, _linalg.det(self.spec, self.rows))

    def is_invertible(self) -> bool:
        return _linalg.det(self.spec, self.rows) != 0

    def inverse(self) -> "Matrix":
        inv = _linalg.inverse(self.spec, self.rows)
        if inv is None:
            raise SingularMatrixError("matrix is singular")
        return Matrix._raw(self.spec, inv)

    def rank(self) -> int:
        return _linalg.rank(self.spec, self.rows)

    def charpoly(self) -> Polynomial:
        return charpoly(self)

    def minpoly(self) -> Polynomial:
        return minpoly(self)

    def eval_poly(self, f: Polynomial) -> "Matrix":
        """``f(A)`` by Horner's rule."""
        if f.spec != self.spec:
            raise FieldMismatchError("polynomial and matrix over different fields")
        s, n = self.spec, self.n
        acc = zero(s, n)
        for c in reversed(f.coeffs):
            acc = acc @ self
            if c:
                rows = [list(r) for r in acc.rows]
                for i in range(n):
                    rows[i][i] = s.add(rows[i][i], c)
                acc = Matrix._raw(s, rows)
        return acc

    # -- text -------------------------------------------------------------------------
    def text(self) -> str:
        """``GF(p^k):[[...],...]``; exact inverse of :func:`parse_matrix`."""
        fmt = self.spec.format_code
        body = ",".join("[" + ",".join(fmt(c) for c in r) + "]" for r in self.rows)
        return f"{self.spec.header()}:[{body}]"

    def __repr__(self):
        return self.text()

    def __str__(self):
        fmt = self.spec.format_code
        cells = [[fmt(c) for c in r] for r in self.rows]
        w = max(len(c) for r in cells for c in r)
        return "\n".join("[" + " ".join(c.rjust(w) for c in r) + "]" for r in cells)


_MATRIX_TEXT = re.compile(r"^\s*(GF\([^)]*\)(?:;\s*mod\s*=\s*\[[^\]]*\])?)\s*:\s*(\[.*\])\s*$", re.S)


def parse_matrix(text: str) -> Matrix:
    m = _MATRIX_TEXT.match(text)
    if not m:
        raise ValueError(f"bad matrix text {text!r}")
    spec = parse_field(m.group(1))
    rows = json.loads(m.group(2))
    return Matrix(spec, [[spec.element(x) for x in r] for r in rows])


# -- constructors ----------------------------------------------------------------------

def identity(spec: FieldSpec, n: int) -> Matrix:
    return Matrix._raw(spec, [[1 if i == j else 0 for j in range(n)] for i in range(n)])


def zero(spec: FieldSpec, n: int) -> Matrix:
    return Matrix._raw(spec, [[0] * n for _ in range(n)])


def scalar(spec: FieldSpec, c, n: int) -> Matrix:
    code = spec.element(c).code
    return Matrix._raw(spec, [[code if i == j else 0 for j in range(n)] for i in range(n)])


def diag(spec: FieldSpec, values: Iterable) -> Matrix:
    vals = [spec.element(v).code for v in values]
    n = len(vals)
    return Matrix._raw(spec, [[vals[i] if i == j else 0 for j in range(n)] for i in range(n)])


def unit_matrix(spec: FieldSpec, i: int, j: int, n: int) -> Matrix:
    """E_{i,j} in M_n with 1-based indices."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"E({i},{j}) out of range for n={n}")
    rows = [[0] * n for _ in range(n)]
    rows[i - 1][j - 1] = 1
    return Matrix._raw(spec, rows)


def tau(spec: FieldSpec, n: int) -> Matrix:
    """The anti-diagonal permutation involution."""
    return Matrix._raw(spec, [[1 if i + j == n - 1 else 0 for j in range(n)] for i in range(n)])


def direct_sum(*blocks: Matrix) -> Matrix:
    if not blocks:
        raise ValueError("direct_sum needs at least one block")
    spec = blocks[0].spec
    n = sum(b.n for b in blocks)
    rows = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        if b.spec != spec:
            raise FieldMismatchError("direct_sum over different fields")
        for i, r in enumerate(b.rows):
            rows[off + i][off:off + b.n] = r
        off += b.n
    return Matrix._raw(spec, rows)


def conjugate(A: Matrix, P: Matrix) -> Matrix:
    """``P A P^{-1}``."""
    return P @ A @ P.inverse()


def companion(f: Polynomial) -> Matrix:
    """Companion matrix: ones on the subdiagonal, last column ``-a_0..-a_{n-1}``."""
    if not f.is_monic() or f.degree < 1:
        raise ValueError(f"companion needs a monic polynomial of degree >= 1, got {f}")
    s, n = f.spec, f.degree
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = 1
    for i in range(n):
        rows[i][n - 1] = s.neg(f.coeffs[i])
    return Matrix._raw(s, rows)


def companion_inverse_formula(f: Polynomial) -> Matrix:
    """Closed form of ``companion(f)^{-1}``: first column ``-a0^{-1} a_{i+1}``
    (last entry ``-a0^{-1}``), identity on the superdiagonal."""
    if not f.is_monic() or f.degree < 1:
        raise ValueError(f"expected monic polynomial of degree >= 1, got {f}")
    s, n = f.spec, f.degree
    a = f.coeffs
    if a[0] == 0:
        raise ValueError("constant term is zero; companion matrix is singular")
    m = s.neg(s.inv(a[0]))
    rows = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i][0] = s.mul(m, a[i + 1])
        rows[i][i + 1] = 1
    rows[n - 1][0] = m
    return Matrix._raw(s, rows)


# -- characteristic and minimal polynomials -----------------------------------------------

def poly_matrix_det(entries: list[list[Polynomial]]) -> Polynomial:
    """Determinant over F[x] by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in entries]
    n = len(m)
    spec = m[0][0].spec
    one = Polynomial._raw(spec, [1])
    sign = one
    prev = one
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return Polynomial._raw(spec, [])
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * pivot - m[i][k] * m[k][j]
                quo, rem = divmod(num, prev)
                assert not rem, "Bareiss division must be exact"
                m[i][j] = quo
        prev = pivot
    return sign * m[n - 1][n - 1]


def charpoly(A: Matrix) -> Polynomial:
    """``det(xI - A)``, monic of degree n."""
    s = A.spec
    entries = [[Polynomial._raw(s, [s.neg(c), 1] if i == j else [s.neg(c)])
                for j, c in enumerate(row)] for i, row in enumerate(A.rows)]
    return poly_matrix_det(entries)


def minpoly(A: Matrix) -> Polynomial:
    """Monic generator of the annihilator ideal of ``A``."""
    s, n = A.spec, A.n
    ech = _linalg.Echelon(s)
    powers = []
    P = identity(s, n)
    # track each echelon row as a combination of the powers seen so far
    combos: list[list[int]] = []
    for d in range(n + 1):
        v = [c for r in P.rows for c in r]
        coeffs = [0] * (d + 1)
        coeffs[d] = 1
        for (pc, row), comb in zip(ech.rows, combos):
            c = v[pc]
            if c:
                g = s.neg(c)
                v = [s.add(x, s.mul(g, y)) if y else x for x, y in zip(v, row)]
                coeffs = [s.add(x, s.mul(g, y)) for x, y in
                          zip(coeffs, comb + [0] * (len(coeffs) - len(comb)))]
        pc = next((i for i, x in enumerate(v) if x), None)
        if pc is None:
            return Polynomial._raw(s, coeffs)
        f = s.inv(v[pc])
        ech.rows.append((pc, [s.mul(x, f) for x in v]))
        combos.append([s.mul(x, f) for x in coeffs])
        powers.append(P)
        P = P @ A
    raise AssertionError("Cayley-Hamilton violated")  # pragma: no cover
