"""Products of involutions in M_n(GF(q)).

B, C and D denote the sets of products of two, three and four involutions.
This module provides

* characterized membership tests (``in_B``, ``in_C``, ``in_D``),
* exact product-closure oracles over small fields (``in_B_bfs`` & co.),
* constructive factorizations (``two_involutions``, ``k_involutions_search``),
* involution enumeration, nilpotency tests, the left-multiplier set of C,
* the explicit "witness" matrices used to break membership in B.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator

import numpy as np

from . import _batch, _linalg
from ._config import CapExceededError, check_census
from .canonical import CanonicalForm, elementary_divisors, rcf
from .field import FieldElement, FieldSpec
from .matrix import (Matrix, SingularMatrixError, companion, direct_sum, identity,
                     poly_matrix_det, scalar, tau, unit_matrix, zero)
from .poly import (Polynomial, is_irreducible, is_self_reciprocal,
                   power_of_self_reciprocal_irreducible, reciprocal)

_ENUM_LIMIT = 2_000_000


class SetId(enum.Enum):
    B = 2
    C = 3
    D = 4

    @property
    def arity(self) -> int:
        return self.value

    @classmethod
    def parse(cls, text: str) -> "SetId":
        return cls[text.strip().upper()]


@dataclass(frozen=True)
class InvolutionFactorization:
    """``product == factors[0] @ factors[1] @ ...`` with every factor an involution."""

    factors: tuple[Matrix, ...]
    product: Matrix

    def __post_init__(self):
        if not self.verify():
            raise ValueError("involution factorization does not verify")

    def verify(self) -> bool:
        if not all(is_involution(J) for J in self.factors):
            return False
        acc = identity(self.product.spec, self.product.n)
        for J in self.factors:
            acc = acc @ J
        return acc == self.product

    def text(self) -> str:
        return "[" + ", ".join(J.text() for J in self.factors) + "]"


@dataclass(frozen=True)
class MembershipVerdict:
    member: bool | None
    method: str
    certificate: InvolutionFactorization | CanonicalForm | None = None

    def __bool__(self):
        if self.member is None:
            raise ValueError("membership is unknown; inspect .member")
        return self.member

    def to_record(self) -> dict:
        cert = None
        if self.certificate is not None:
            cert = self.certificate.text()
        return {"member": "unknown" if self.member is None else self.member,
                "method": self.method, "certificate": cert}


# -- basic predicates ------------------------------------------------------------------

def is_involution(A: Matrix) -> bool:
    return A @ A == identity(A.spec, A.n)


def _pairing(form: CanonicalForm) -> list[tuple[int, ...]] | None:
    """Split the blocks into self-reciprocal singles and reciprocal pairs."""
    singles_or_pairs: list[tuple[int, ...]] = []
    waiting: dict[tuple[Polynomial, int], list[int]] = {}
    for idx, (p, m) in enumerate(form.blocks):
        if is_self_reciprocal(p):
            singles_or_pairs.append((idx,))
            continue
        partner = (reciprocal(p), m)
        if waiting.get(partner):
            singles_or_pairs.append((waiting[partner].pop(), idx))
        else:
            waiting.setdefault((p, m), []).append(idx)
    if any(waiting.values()):
        return None
    return singles_or_pairs


def in_B(A: Matrix) -> MembershipVerdict:
    """Product of two involutions, decided from the elementary divisors."""
    if not A.is_invertible():
        raise SingularMatrixError("in_B needs an invertible matrix")
    form = elementary_divisors(A)
    return MembershipVerdict(_pairing(form) is not None, "characterized", form)


def in_D(A: Matrix) -> MembershipVerdict:
    d = A.det()
    return MembershipVerdict(d * d == 1, "characterized")


def c_equals_d(spec: FieldSpec, n: int) -> bool:
    """Whether every det +-1 matrix is a product of three involutions."""
    if n <= 2 or spec.q in (2, 3, 5):
        return True
    if n == 3:
        return spec.p == 3 or is_irreducible(Polynomial(spec, [1, 1, 1]))
    return n == 4 and spec.p == 2


def in_C(A: Matrix) -> MembershipVerdict:
    spec, n = A.spec, A.n
    if c_equals_d(spec, n):
        return in_D(A)
    if n == 3:
        d = A.det()
        if d * d != 1:
            return MembershipVerdict(False, "characterized")
        if not A.is_scalar():
            return MembershipVerdict(True, "characterized")
        alpha = A[0, 0]
        return MembershipVerdict(alpha**4 + alpha**2 + 1 != 0, "characterized")
    try:
        C = in_C_bfs(spec, n)
    except CapExceededError:
        return MembershipVerdict(None, "search")
    return MembershipVerdict(A in C, "bfs-oracle")


def in_set(A: Matrix, which: SetId) -> MembershipVerdict:
    """Dispatch to the characterized test; singular matrices are never members."""
    if which is SetId.D:
        return in_D(A)
    if which is SetId.C:
        return in_C(A)
    if not A.is_invertible():
        return MembershipVerdict(False, "characterized")
    return in_B(A)


# -- involution enumeration ----------------------------------------------------------------

def _subspaces(spec: FieldSpec, n: int, r: int) -> Iterator[tuple[list[list[int]], list[int]]]:
    """r-dimensional subspaces of GF(q)^n as (RREF basis rows, pivot columns)."""
    q = spec.q
    for pivots in combinations(range(n), r):
        slots = [(i, c) for i, pc in enumerate(pivots) for c in range(pc + 1, n)
                 if c not in pivots]
        for vals in product(range(q), repeat=len(slots)):
            rows = [[0] * n for _ in range(r)]
            for i, pc in enumerate(pivots):
                rows[i][pc] = 1
            for (i, c), v in zip(slots, vals):
                rows[i][c] = v
            yield rows, list(pivots)


def _gaussian_binomial(q: int, n: int, r: int) -> int:
    num = den = 1
    for i in range(r):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _full_rank_count(q: int, rows: int, cols: int) -> int:
    out = 1
    for i in range(rows):
        out *= q**cols - q**i
    return out


def involution_count(spec: FieldSpec, n: int) -> int:
    """Number of involutions in GL_n(GF(q)), from the subspace description."""
    q = spec.q
    if spec.p != 2:
        return sum(_gaussian_binomial(q, n, r) * q ** (r * (n - r)) for r in range(n + 1))
    return sum(_gaussian_binomial(q, n, r) * _full_rank_count(q, r, n - r)
               for r in range(n // 2 + 1))


def _involutions_odd(spec: FieldSpec, n: int) -> Iterator[Matrix]:
    # J is fixed by its +1 eigenspace U and a complement W; W ranges over
    # graphs of maps from the coordinate complement of U into U.
    s = spec
    for r in range(n, -1, -1):
        for basis, pivots in _subspaces(s, n, r):
            others = [c for c in range(n) if c not in pivots]
            for phi in product(range(s.q), repeat=r * (n - r)):
                cols = [list(b) for b in basis]
                for j, c in enumerate(others):
                    w = [0] * n
                    w[c] = 1
                    for i in range(r):
                        coef = phi[i * (n - r) + j]
                        if coef:
                            w = [s.add(x, s.mul(coef, y)) for x, y in zip(w, basis[i])]
                    cols.append(w)
                S = Matrix._raw(s, [list(row) for row in zip(*cols)])
                D = [1] * r + [s.neg(1)] * (n - r)
                Dm = Matrix._raw(s, [[D[i] if i == j else 0 for j in range(n)] for i in range(n)])
                yield S @ Dm @ S.inverse()


def _involutions_even(spec: FieldSpec, n: int) -> Iterator[Matrix]:
    # char 2: J = I + K with K^2 = 0; K = B N A where B spans im K,
    # the rows of A span the annihilator of im K and N has full rank.
    s = spec
    I = identity(s, n)
    for r in range(n // 2 + 1):
        if r == 0:
            yield I
            continue
        for basis, _ in _subspaces(s, n, r):
            Bm = [list(col) for col in zip(*basis)]  # n x r
            ann = _linalg.nullspace(s, basis, n)   # n - r vectors y with basis @ y = 0
            for vals in product(range(s.q), repeat=r * (n - r)):
                N = [list(vals[i * (n - r):(i + 1) * (n - r)]) for i in range(r)]
                if _linalg.rank(s, N) < r:
                    continue
                K = _linalg.matmul(s, _linalg.matmul(s, Bm, N), ann)
                yield I + Matrix._raw(s, K)


def _involution_tuple(spec: FieldSpec, n: int) -> tuple[Matrix, ...]:
    # caps are checked before the cache so a later, lower cap still applies
    check_census(spec.q, what="involution enumeration")
    if involution_count(spec, n) > _ENUM_LIMIT:
        raise CapExceededError(f"too many involutions in GL_{n}({spec}) to enumerate")
    return _involution_tuple_cached(spec, n)


@lru_cache(maxsize=64)
def _involution_tuple_cached(spec: FieldSpec, n: int) -> tuple[Matrix, ...]:
    gen = _involutions_even if spec.p == 2 else _involutions_odd
    return tuple(gen(spec, n))


def enumerate_involutions(spec: FieldSpec, n: int) -> list[Matrix]:
    """All J with J^2 = I, without duplicates (identity first)."""
    return list(_involution_tuple(spec, n))


# -- product-closure oracles --------------------------------------------------------------

def product_sets(spec: FieldSpec, n: int) -> tuple[_batch.ProductSet, ...]:
    """Exact (B, C, D) by closing the involutions under left multiplication."""
    check_census(spec.q, n, what="product-closure oracle")
    return _product_sets_cached(spec, n)


@lru_cache(maxsize=32)
def _product_sets_cached(spec: FieldSpec, n: int) -> tuple[_batch.ProductSet, ...]:
    inv = _batch.stack(_involution_tuple(spec, n))
    b_keys = _batch.left_products(spec, inv, inv)
    B = _batch.ProductSet(spec, n, b_keys)
    C = _batch.ProductSet(spec, n, _batch.left_products(spec, inv, B.stack()))
    D = _batch.ProductSet(spec, n, _batch.left_products(spec, inv, C.stack()))
    return B, C, D


def in_B_bfs(spec: FieldSpec, n: int) -> _batch.ProductSet:
    return product_sets(spec, n)[0]


def in_C_bfs(spec: FieldSpec, n: int) -> _batch.ProductSet:
    return product_sets(spec, n)[1]


def in_D_bfs(spec: FieldSpec, n: int) -> _batch.ProductSet:
    return product_sets(spec, n)[2]


def bfs_set(spec: FieldSpec, n: int, which: SetId) -> _batch.ProductSet:
    return product_sets(spec, n)[which.value - 2]


# -- factorizations ---------------------------------------------------------------------------

def two_involutions(A: Matrix) -> InvolutionFactorization:
    """Write ``A`` in B as ``J1 @ J2``.

    In the canonical basis a self-reciprocal block ``C_f`` is reversed by the
    anti-diagonal ``tau``; a reciprocal pair ``C_g, C_g~`` by ``tau`` placed
    on the off-diagonal block positions.  The assembled reverser ``S``
    satisfies ``S B^{-1} S = B``, so ``B = (B S) S`` with both factors
    involutions.
    """
    if not A.is_invertible():
        raise SingularMatrixError("two_involutions needs an invertible matrix")
    form, conj = rcf(A)
    groups = _pairing(form)
    if groups is None:
        raise ValueError("matrix is not a product of two involutions")
    s, n = A.spec, A.n
    sizes = [p.degree * m for p, m in form.blocks]
    offsets = [sum(sizes[:i]) for i in range(len(sizes))]
    rows = [[0] * n for _ in range(n)]
    for g in groups:
        i, j = (g[0], g[0]) if len(g) == 1 else g
        size = sizes[i]
        for t in range(size):
            rows[offsets[i] + t][offsets[j] + size - 1 - t] = 1
            rows[offsets[j] + t][offsets[i] + size - 1 - t] = 1
    S = Matrix._raw(s, rows)
    P = conj.P
    J2 = P.inverse() @ S @ P
    J1 = A @ J2
    return InvolutionFactorization((J1, J2), A)


def k_involutions_search(A: Matrix, k: int) -> InvolutionFactorization | None:
    """Search for a product of ``k`` (2, 3 or 4) involutions equal to ``A``."""
    if k not in (2, 3, 4):
        raise ValueError("k must be 2, 3 or 4")
    d = A.det()
    if d * d != 1:
        return None
    if k == 2:
        return two_involutions(A) if in_B(A).member else None
    invs = _involution_tuple(A.spec, A.n)
    for J in invs:
        M = J @ A
        if k == 3:
            if in_B(M).member:
                inner = two_involutions(M)
                return InvolutionFactorization((J,) + inner.factors, A)
        else:
            if in_C(M).member is False:
                continue
            inner = k_involutions_search(M, 3)
            if inner is not None:
                return InvolutionFactorization((J,) + inner.factors, A)
    return None


# -- nilpotency ------------------------------------------------------------------------------

def is_nilpotent(N: Matrix) -> bool:
    """Decided by ``charpoly(N) == x^n``."""
    return N.charpoly().coeffs == (0,) * N.n + (1,)


def pencil_det(N: Matrix) -> Polynomial:
    """``det(I + tN)`` as a polynomial in ``t``."""
    s = N.spec
    entries = [[Polynomial(s, [1 if i == j else 0, c]) for j, c in enumerate(row)]
               for i, row in enumerate(N.rows)]
    return poly_matrix_det(entries)


# -- left multipliers of C ----------------------------------------------------------------

def lambda_census(spec: FieldSpec, n: int) -> _batch.ProductSet:
    """All ``P`` with ``P X`` in C for every ``X`` in C (a subset of C, as I is in C)."""
    C = in_C_bfs(spec, n)
    K = _batch.kernel(spec)
    Cs = C.stack()
    lookup = np.zeros(spec.q ** (n * n), dtype=bool)
    lookup[C.keys] = True
    chunk = max(1, 4_000_000 // (len(Cs) * n * n))
    keep = []
    for start in range(0, len(Cs), chunk):
        L = Cs[start:start + chunk]
        ok = lookup[K.encode(K.matmul(L[:, None], Cs[None, :]))].all(axis=1)
        keep.append(C.keys[start:start + chunk][ok])
    return _batch.ProductSet(spec, n, np.concatenate(keep))


def lambda_member(A: Matrix) -> bool | None:
    """Membership in the left-multiplier set of C; ``None`` when undecided."""
    spec, n = A.spec, A.n
    try:
        C = in_C_bfs(spec, n)
    except CapExceededError:
        if c_equals_d(spec, n):
            return bool(in_D(A))
        if n == 3 and spec.p not in (2, 3):
            return A == identity(spec, n) or A == -identity(spec, n)
        return None
    K = _batch.kernel(spec)
    Am = np.array(A.rows, dtype=np.int64)
    return bool(C.contains_keys(K.encode(K.matmul(Am[None], C.stack()))).all())


# -- witnesses ------------------------------------------------------------------------------

def _require_odd(spec: FieldSpec) -> None:
    if spec.p == 2:
        raise ValueError("this construction needs characteristic != 2")


def witness_type2(g: Polynomial) -> Matrix:
    """``N = O (+) E_{1,n}`` breaking membership of ``C_g (+) C_g~`` in B."""
    n = g.degree
    if not g.is_monic() or n < 2 or g.coeffs[0] == 0:
        raise ValueError("g must be monic of degree >= 2 with g(0) != 0")
    if power_of_self_reciprocal_irreducible(g):
        raise ValueError("g must not be a power of a self-reciprocal irreducible")
    s = g.spec
    N = direct_sum(zero(s, n), unit_matrix(s, 1, n, n))
    A = direct_sum(companion(g), companion(reciprocal(g)))
    if in_B(A @ (identity(s, 2 * n) + N)).member:
        # happens for some self-reciprocal g, e.g. x^2+1 over GF(5)
        raise RuntimeError(f"witness_type2 postcondition failed: A(I+N) is in B for g = {g}")
    return N


def witness_type1(f: Polynomial) -> Matrix:
    """``N = E_{1,n}`` breaking membership of ``C_f`` in B."""
    n = f.degree
    if not f.is_monic() or n < 3 or f.coeffs[0] == 0:
        raise ValueError("f must be monic of degree >= 3 with f(0) != 0")
    if not power_of_self_reciprocal_irreducible(f):
        raise ValueError("f must be a power of a self-reciprocal irreducible")
    s = f.spec
    N = unit_matrix(s, 1, n, n)
    if in_B(companion(f) @ (identity(s, n) + N)).member:
        raise RuntimeError("witness_type1 postcondition failed")
    return N


def quadratic_block(a1: FieldElement) -> Matrix:
    """``[[0, -1], [1, -a1]]``, the companion matrix of ``x^2 + a1 x + 1``."""
    return companion(Polynomial(a1.spec, [1, a1, 1]))


def witness_two(a1: FieldElement, r: FieldElement) -> Matrix:
    """Trace-zero ``X`` in B_2 with ``r A X`` outside B_2, ``A = quadratic_block(a1)``."""
    s = a1.spec
    _require_odd(s)
    r = s.element(r)
    if r.is_zero():
        raise ValueError("r must be nonzero")
    y = next(e for e in s.enumerate_all() if e != -a1)
    Y = Matrix(s, [[1, y], [0, -1]])
    X = Y if r * r != -1 else Y.scalar_mul(r)
    A = quadratic_block(a1)
    if not (X.trace().is_zero() and in_B(X).member and not in_B(A.scalar_mul(r) @ X).member):
        raise RuntimeError("witness_two postcondition failed")
    return X


def witness_three(a1: FieldElement, alpha, r: FieldElement) -> Matrix:
    """Trace-zero ``X`` in B_3 with ``r A X`` outside B_3, ``A = quadratic_block(a1) (+) alpha``."""
    s = a1.spec
    _require_odd(s)
    alpha = s.element(alpha)
    r = s.element(r)
    if alpha * alpha != 1:
        raise ValueError("alpha must be +1 or -1")
    if r.is_zero():
        raise ValueError("r must be nonzero")
    for a in s.enumerate_all():
        if a * a + a * a1 + 1 - r * r != 0:
            break
    else:  # pragma: no cover - impossible for q > 2
        raise ValueError("no admissible parameter")
    X = Matrix(s, [[0, 1, a], [0, 0, -1], [1, a, 0]])
    A = direct_sum(quadratic_block(a1), scalar(s, alpha, 1))
    if not (X.trace().is_zero() and in_B(X).member and not in_B(A.scalar_mul(r) @ X).member):
        raise RuntimeError("witness_three postcondition failed")
    return X
