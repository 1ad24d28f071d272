from itertools import permutations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from involkit._batch import kernel
from involkit.field import GF
from involkit.matrix import (Matrix, SingularMatrixError, charpoly, companion,
                             companion_inverse_formula, conjugate, diag, direct_sum, identity,
                             minpoly, parse_matrix, scalar, tau, unit_matrix, zero)
from involkit.poly import Polynomial, factor, reciprocal
from strategies import SMALL_FIELDS, field_and_matrix, fields, matrices, monic


def _sign(perm):
    inv = sum(perm[i] > perm[j] for i in range(len(perm)) for j in range(i + 1, len(perm)))
    return -1 if inv % 2 else 1


def _leibniz_charpoly(A):
    """det(xI - A) by full permutation expansion over F[x]."""
    F, n = A.spec, A.n
    x = Polynomial.x(F)
    entries = [[(x if i == j else Polynomial(F, [])) - Polynomial(F, [A[i, j]])
                for j in range(n)] for i in range(n)]
    total = Polynomial(F, [])
    for perm in permutations(range(n)):
        term = Polynomial(F, [_sign(perm)])
        for i, j in enumerate(perm):
            term = term * entries[i][j]
        total = total + term
    return total


@given(field_and_matrix(max_n=4))
def test_charpoly_matches_leibniz(A):
    assert charpoly(A) == _leibniz_charpoly(A)


@given(field_and_matrix(max_n=4))
def test_cayley_hamilton_and_minpoly(A):
    f, m = A.charpoly(), A.minpoly()
    n = A.n
    assert A.eval_poly(f) == zero(A.spec, n)
    assert A.eval_poly(m) == zero(A.spec, n)
    assert m.is_monic() and not f % m
    # no proper monic divisor of m annihilates A
    for p, _ in factor(m).factors:
        assert A.eval_poly(m // p) != zero(A.spec, n)


@given(fields, st.data())
def test_det_matches_leibniz_kernel(spec, data):
    n = data.draw(st.integers(1, 4))
    A, B = data.draw(matrices(spec, n)), data.draw(matrices(spec, n))
    K = kernel(spec)
    assert A.det().code == int(K.det(np.array(A.rows))[()])
    assert (A @ B).det() == A.det() * B.det()


@given(field_and_matrix(max_n=4, pred=lambda M: M.is_invertible()))
def test_inverse(A):
    I = identity(A.spec, A.n)
    assert A @ A.inverse() == I == A.inverse() @ A
    assert A ** -2 == (A @ A).inverse()


@given(field_and_matrix(max_n=4))
def test_rank_and_transpose(A):
    assert A.rank() == A.T.rank()
    assert (A.rank() == A.n) == A.is_invertible()
    assert (A.T).T == A


def test_singular_inverse_raises():
    with pytest.raises(SingularMatrixError):
        Matrix(GF(5), [[1, 2], [2, 4]]).inverse()


def test_companion_examples():
    F = GF(7)
    f = Polynomial(F, [2, 3, 1])
    C = companion(f)
    assert C == Matrix(F, [[0, 5], [1, 4]])
    assert companion_inverse_formula(f) == Matrix(F, [[2, 1], [3, 0]]) == C.inverse()
    assert charpoly(C) == f == minpoly(C)
    assert minpoly(identity(GF(7), 3)) == Polynomial(F, [-1, 1])
    assert charpoly(Matrix(GF(5), [[0, 1], [-1, 0]])) == Polynomial(GF(5), [1, 0, 1])


@given(fields, st.data())
def test_companion_inverse_formula_and_tau(spec, data):
    f = data.draw(monic(spec, unit_constant=True))
    C = companion(f)
    assert charpoly(C) == f == minpoly(C)
    if f.coeffs[0]:
        assert companion_inverse_formula(f) == C.inverse()
        t = tau(spec, f.degree)
        assert t @ C.inverse() @ t == companion(reciprocal(f))


def test_constructors():
    F = GF(3)
    assert unit_matrix(F, 1, 2, 2) == Matrix(F, [[0, 1], [0, 0]])
    assert tau(F, 3) @ tau(F, 3) == identity(F, 3)
    assert direct_sum(diag(F, [1, 2]), scalar(F, 2, 1)) == diag(F, [1, 2, 2])
    P = Matrix(F, [[1, 1], [0, 1]])
    A = diag(F, [1, 2])
    assert conjugate(A, P) == P @ A @ P.inverse()
    assert identity(F, 2).is_scalar() and not A.is_scalar()
    assert A.trace() == 0


@pytest.mark.parametrize("spec", SMALL_FIELDS, ids=str)
def test_text_and_key_roundtrip(spec):
    rng = np.random.default_rng(spec.q)
    for n in (1, 2, 3):
        A = Matrix._raw(spec, rng.integers(0, spec.q, (n, n)).tolist())
        assert parse_matrix(A.text()) == A
        assert Matrix.from_key(spec, n, A.key()) == A


def test_parse_matrix_errors():
    for bad in ["GF(5)[[1]]", "GF(5):[[1,2],[3]]", "GF(5):[[1,2]]", "GF(6):[[1]]"]:
        with pytest.raises(ValueError):
            parse_matrix(bad)


def test_dimension_mismatch():
    F = GF(5)
    with pytest.raises(ValueError):
        identity(F, 2) @ identity(F, 3)
    with pytest.raises(ValueError):
        identity(F, 2) + identity(GF(7), 2)
