from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from involkit import _config
from involkit._batch import kernel
from involkit._config import CapExceededError
from involkit.field import GF
from involkit.involution import (SetId, c_equals_d, enumerate_involutions, in_B, in_C,
                                 in_C_bfs, in_D, in_set, involution_count, is_involution,
                                 is_nilpotent, k_involutions_search, lambda_census,
                                 lambda_member, pencil_det, product_sets, quadratic_block,
                                 two_involutions, witness_three, witness_two, witness_type1,
                                 witness_type2)
from involkit.matrix import (Matrix, SingularMatrixError, companion, diag, direct_sum,
                             identity, scalar, tau, unit_matrix)
from involkit.poly import Polynomial, reciprocal
from strategies import invertible, matrices


def _scan_involutions(F, n):
    K = kernel(F)
    X = K.all_matrices(n)
    I = np.eye(n, dtype=np.int64)
    return int((K.matmul(X, X) == I).all(axis=(1, 2)).sum())


def _gl_order(q, n):
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


@pytest.mark.parametrize("q,n", [(2, 2), (3, 2), (4, 2), (5, 2), (2, 3), (3, 3), (2, 4)])
def test_involution_count_matches_scan(q, n):
    F = GF(q)
    invs = enumerate_involutions(F, n)
    assert len(invs) == len(set(invs)) == involution_count(F, n) == _scan_involutions(F, n)
    assert all(is_involution(J) for J in invs)


def test_involution_count_orbit_stabilizer():
    # odd characteristic: classes of diag(I_k, -I_{n-k}) with centralizer GL_k x GL_{n-k}
    q, n = 7, 3
    expected = sum(_gl_order(q, n) // (_gl_order(q, k) * _gl_order(q, n - k)) for k in range(n + 1))
    assert len(enumerate_involutions(GF(q), n)) == expected == 5588


def test_is_involution_examples():
    F = GF(5)
    assert is_involution(tau(F, 4)) and is_involution(identity(F, 3))
    assert not is_involution(unit_matrix(F, 1, 2, 2))


@pytest.mark.parametrize("q,n", [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (5, 2)])
def test_characterized_tests_agree_with_bfs(q, n):
    F = GF(q)
    B, C, D = product_sets(F, n)
    assert B <= C <= D
    K = kernel(F)
    X = K.all_matrices(n)
    inB, inC, inD = (S.contains_keys(K.encode(X)) for S in (B, C, D))
    for rows, b, c, d in zip(X, inB, inC, inD):
        A = Matrix._raw(F, rows.tolist())
        assert in_set(A, SetId.B).member == b
        assert in_C(A).member == c
        assert in_D(A).member == d


@pytest.mark.slow
def test_c3_scalar_rule_in_char_two():
    # GF(4): C_3 != D_3 and exactly the scalars w I, w^2 I separate them
    F = GF(4)
    _, C, D = product_sets(F, 3)
    assert not c_equals_d(F, 3)
    assert len(D) - len(C) == 2
    missing = [A for A in D if A not in C]
    assert all(A.is_scalar() and A != identity(F, 3) for A in missing)
    assert all(in_C(A).member is False for A in missing)


@given(st.sampled_from([GF(5), GF(7), GF(8), GF(9)]), st.data())
def test_membership_chain(F, data):
    n = data.draw(st.integers(1, 3))
    A = data.draw(matrices(F, n))
    b, c, d = (in_set(A, s).member for s in SetId)
    assert (not b or c) and (not c or d)


def test_in_B_examples():
    F7 = GF(7)
    assert in_B(diag(F7, [2, 4])).member
    F2 = GF(2)
    A = companion(Polynomial(F2, [1, 0, 1, 1]))
    assert A == Matrix(F2, [[0, 0, 1], [1, 0, 0], [0, 1, 1]])
    assert not in_B(A).member and in_D(A).member
    # (0 1; 1 1) leaves B_2 in odd characteristic; over GF(2) B_2 is all of GL_2
    assert not in_B(Matrix(GF(3), [[0, 1], [1, 1]])).member
    assert not in_B(Matrix(GF(5), [[0, 1], [1, 1]])).member
    assert in_B(Matrix(F2, [[0, 1], [1, 1]])).member
    with pytest.raises(SingularMatrixError):
        in_B(diag(F7, [0, 1]))


def test_in_D_and_in_C_examples():
    F7 = GF(7)
    assert not in_D(diag(F7, [2, 2])).member
    assert in_D(scalar(F7, 3, 3)).member
    assert in_C(scalar(F7, 2, 3)).member is False
    assert in_C(companion(Polynomial(F7, [1, 0, 1, 1]))).member is True
    assert in_C(Matrix(GF(2), [[0, 0, 1], [1, 0, 0], [0, 1, 1]])).member
    unknown = in_C(identity(GF(7), 4))
    assert unknown.member is None and unknown.method == "search"
    with pytest.raises(ValueError):
        bool(unknown)
    assert unknown.to_record()["member"] == "unknown"


def test_c_equals_d_table():
    assert c_equals_d(GF(7), 2) and c_equals_d(GF(5), 6) and c_equals_d(GF(8), 4)
    assert c_equals_d(GF(9), 3) and c_equals_d(GF(11), 3)  # char 3; t^2+t+1 irreducible mod 11
    assert not c_equals_d(GF(7), 3) and not c_equals_d(GF(4), 3) and not c_equals_d(GF(7), 4)


@given(st.sampled_from([GF(2), GF(3), GF(5), GF(7), GF(9)]), st.data())
def test_two_involutions_random(F, data):
    n = data.draw(st.integers(1, 4))
    A = data.draw(invertible(F, n).filter(lambda M: in_B(M).member))
    J1, J2 = two_involutions(A).factors
    assert is_involution(J1) and is_involution(J2) and J1 @ J2 == A


def test_two_involutions_examples():
    F = GF(7)
    fac = two_involutions(diag(F, [2, 4]))
    assert fac.verify()
    F5 = GF(5)
    fac = two_involutions(companion(Polynomial(F5, [1, 1]) ** 3))
    assert fac.verify()
    with pytest.raises(ValueError):
        two_involutions(Matrix(GF(3), [[0, 1], [1, 1]]))


def test_k_involution_search():
    F2 = GF(2)
    A = Matrix(F2, [[0, 0, 1], [1, 0, 0], [0, 1, 1]])
    assert k_involutions_search(A, 2) is None
    fac = k_involutions_search(A, 3)
    assert fac is not None and len(fac.factors) == 3
    twoI = scalar(GF(7), 2, 3)
    four = k_involutions_search(twoI, 4)
    assert four is not None and four.verify() and len(four.factors) == 4
    assert k_involutions_search(diag(GF(7), [2, 2]), 4) is None


def test_cap_exceeded():
    with pytest.raises(CapExceededError):
        product_sets(GF(13), 2)
    with pytest.raises(CapExceededError):
        in_C_bfs(GF(3), 5)


def test_cap_applies_after_cached_run():
    previous = _config.set_census_cap(13)
    try:
        assert len(product_sets(GF(13), 2)[2]) > 0
    finally:
        _config.set_census_cap(previous)
    with pytest.raises(CapExceededError):
        product_sets(GF(13), 2)
    with pytest.raises(CapExceededError):
        enumerate_involutions(GF(13), 2)


# -- nilpotency ------------------------------------------------------------------------------

def test_pencil_examples():
    F3 = GF(3)
    N = unit_matrix(F3, 1, 2, 2)
    assert is_nilpotent(N) and pencil_det(N) == Polynomial(F3, [1])
    assert not is_nilpotent(identity(F3, 2))
    assert pencil_det(identity(F3, 2)) == Polynomial(F3, [1, 1]) ** 2
    R = Matrix(F3, [[0, 1], [-1, 0]])
    assert not is_nilpotent(R) and pencil_det(R) == Polynomial(F3, [1, 0, 1])


def test_pointwise_pencil_is_weaker_over_tiny_fields():
    # det(I + tN) = 1 for both t in GF(2), yet N is not nilpotent
    F = GF(2)
    N = Matrix(F, [[1, 1], [1, 0]])
    assert all((identity(F, 2) + N.scalar_mul(t)).det() == 1 for t in F.enumerate_all())
    assert not is_nilpotent(N)
    assert pencil_det(N) != Polynomial(F, [1])


@given(st.data())
def test_pointwise_pencil_over_larger_fields(data):
    F = GF(5)
    n = data.draw(st.integers(1, 3))
    N = data.draw(matrices(F, n))
    pointwise = all((identity(F, n) + N.scalar_mul(t)).det() == 1 for t in F.enumerate_all())
    assert pointwise == is_nilpotent(N)


@pytest.mark.parametrize("q,n", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_unipotent_lines_lie_in_B(q, n):
    F = GF(q)
    I = identity(F, n)
    for vals in product(range(q), repeat=n * n):
        N = Matrix._raw(F, [list(vals[i * n:(i + 1) * n]) for i in range(n)])
        if not is_nilpotent(N):
            continue
        for t in F.enumerate_all():
            assert in_B(I + N.scalar_mul(t)).member
            assert in_B(-I + N.scalar_mul(t)).member


# -- left multipliers of C ------------------------------------------------------------------

def test_lambda_small():
    F = GF(3)
    L = lambda_census(F, 2)
    assert L == product_sets(F, 2)[2]
    assert lambda_member(identity(F, 2))
    for A in L:
        assert -A in L and A.inverse() in L
    # outside the census: characterized branches and unknown
    F7 = GF(7)
    assert lambda_member(-identity(F7, 3)) is True
    assert lambda_member(diag(F7, [1, 1, -1])) is False
    assert lambda_member(identity(GF(13), 5)) is None


# -- witnesses ------------------------------------------------------------------------------

@pytest.mark.parametrize("q,coeffs", [(7, [2, 3, 1]), (5, [3, 1, 1])])
def test_witness_type2(q, coeffs):
    F = GF(q)
    g = Polynomial(F, coeffs)
    N = witness_type2(g)
    n = g.degree
    A = direct_sum(companion(g), companion(reciprocal(g)))
    M = A @ (identity(F, 2 * n) + N)
    assert not in_B(M).member
    # the second block is C_h, where h differs from g~ only in the x coefficient, by -1
    h = M.charpoly() // g
    gt = reciprocal(g)
    assert (gt - h) == Polynomial(F, [0, 1])


def test_witness_type2_counterexample():
    # x^2+1 = (x-2)(x-3) over GF(5) is self-reciprocal without being a power of a
    # self-reciprocal irreducible; the perturbed product stays in B
    F = GF(5)
    g = Polynomial(F, [1, 0, 1])
    A = direct_sum(companion(g), companion(g))
    N = direct_sum(Matrix(F, [[0, 0], [0, 0]]), unit_matrix(F, 1, 2, 2))
    assert in_B(A @ (identity(F, 4) + N)).member
    with pytest.raises(RuntimeError):
        witness_type2(g)


def test_witness_type2_preconditions():
    F = GF(5)
    with pytest.raises(ValueError):
        witness_type2(Polynomial(F, [1, 1]) ** 2)
    with pytest.raises(ValueError):
        witness_type2(Polynomial(F, [0, 1, 1]))


@pytest.mark.parametrize("q", [5, 7])
def test_witness_type1(q):
    F = GF(q)
    f = Polynomial(F, [1, 1]) ** 3
    N = witness_type1(f)
    M = companion(f) @ (identity(F, 3) + N)
    assert not in_B(M).member
    if q == 5:
        assert M.charpoly() == Polynomial(F, [1, 2, 3, 1])


def test_witness_type1_preconditions():
    F3 = GF(3)
    f = Polynomial(F3, [2, 1]) ** 3  # (x-1)^3 = x^3 - 1 in char 3
    assert not in_B(companion(f) @ (identity(F3, 3) + witness_type1(f))).member
    with pytest.raises(ValueError):
        witness_type1(Polynomial(F3, [1, 0, 1]))  # degree 2
    with pytest.raises(ValueError):
        witness_type1(Polynomial(GF(5), [2, 1]) ** 3)  # x+2 is not self-reciprocal


def test_witness_two_examples():
    F = GF(5)
    X = witness_two(F.zero, F.one)
    assert X == Matrix(F, [[1, 1], [0, -1]])
    X2 = witness_two(F.zero, F.element(2))
    assert X2 == Matrix(F, [[1, 1], [0, -1]]).scalar_mul(2)
    with pytest.raises(ValueError):
        witness_two(F.zero, F.zero)
    with pytest.raises(ValueError):
        witness_two(GF(4).zero, GF(4).one)


@pytest.mark.parametrize("q", [5, 7, 9])
def test_witness_two_charpoly(q):
    F = GF(q)
    for a1 in F.enumerate_all():
        for r in F.enumerate_all()[1:]:
            X = witness_two(a1, r)
            y = next(e for e in F.enumerate_all() if e != -a1)
            Y = Matrix(F, [[1, y], [0, -1]])
            RY = quadratic_block(a1).scalar_mul(r) @ Y
            assert RY.charpoly() == Polynomial(F, [-r * r, -r * (y + a1), 1])
            assert X.trace() == 0 and in_B(X).member
            assert not in_B(quadratic_block(a1).scalar_mul(r) @ X).member


def test_witness_three_examples():
    F5 = GF(5)
    X = witness_three(F5.zero, 1, F5.one)
    assert X == Matrix(F5, [[0, 1, 1], [0, 0, -1], [1, 1, 0]])
    F7 = GF(7)
    a1, alpha, r = F7.element(2), F7.element(-1), F7.element(3)
    X = witness_three(a1, alpha, r)
    a = X[0, 2]
    A = direct_sum(quadratic_block(a1), scalar(F7, alpha, 1))
    expected = Polynomial(F7, [alpha * r**3, -(a * a + a * a1 + 1) * alpha * r * r, -r, 1])
    assert (A.scalar_mul(r) @ X).charpoly() == expected
    assert X.charpoly() == Polynomial(F7, [1, 0, 0, 1])
    with pytest.raises(ValueError):
        witness_three(F7.zero, 2, F7.one)
