from itertools import product

import pytest
from hypothesis import given

from involkit.canonical import (conjugator_between, elementary_divisors, parse_canonical, rcf,
                                similar, similar_to_inverse)
from involkit.field import GF
from involkit.matrix import Matrix, SingularMatrixError, conjugate, diag, identity
from involkit.poly import Polynomial, is_irreducible
from strategies import field_and_matrix


def _all_matrices(F, n):
    for vals in product(range(F.q), repeat=n * n):
        yield Matrix._raw(F, [list(vals[i * n:(i + 1) * n]) for i in range(n)])


@pytest.mark.parametrize("q", [2, 3])
def test_similarity_matches_orbit_enumeration(q):
    F = GF(q)
    mats = list(_all_matrices(F, 2))
    gl = [P for P in mats if P.is_invertible()]
    seen, classes = set(), []
    for A in mats:
        if A in seen:
            continue
        orbit = {P @ A @ P.inverse() for P in gl}
        seen |= orbit
        classes.append(orbit)
    assert len(classes) == q * q + q
    forms = [{elementary_divisors(A) for A in orbit} for orbit in classes]
    assert all(len(f) == 1 for f in forms)
    assert len({next(iter(f)) for f in forms}) == len(classes)


@given(field_and_matrix(max_n=5))
def test_conjugator_verifies(A):
    form, conj = rcf(A)
    assert conjugate(A, conj.P) == form.assemble()
    assert form == elementary_divisors(A)
    assert form.n == A.n
    for p, m in form.blocks:
        assert is_irreducible(p) and m >= 1


@given(field_and_matrix(max_n=4))
def test_text_roundtrip(A):
    form = elementary_divisors(A)
    assert parse_canonical(form.text(), A.spec) == form


@given(field_and_matrix(max_n=4, pred=lambda M: M.is_invertible()))
def test_conjugator_between(A):
    form, conj = rcf(A)
    B = form.assemble()
    P = conjugator_between(A, B)
    assert A == P @ B @ P.inverse()


def test_examples():
    F2 = GF(2)
    form = elementary_divisors(Matrix(F2, [[1, 1, 0], [0, 1, 0], [0, 0, 1]]))
    assert form.text() == "rcf{poly[1,1]^1, poly[1,1]^2}"
    x1 = Polynomial(F2, [1, 1])
    assert form.divisors == (x1, x1**2)

    F3 = GF(3)
    assert elementary_divisors(identity(F3, 2)).divisors == (Polynomial(F3, [-1, 1]),) * 2

    F7 = GF(7)
    divs = elementary_divisors(diag(F7, [2, 4])).divisors
    assert set(divs) == {Polynomial(F7, [-2, 1]), Polynomial(F7, [-4, 1])}


def test_similar_to_inverse():
    F = GF(7)
    assert similar_to_inverse(diag(F, [2, 4]))
    assert not similar_to_inverse(diag(F, [2, 2]))
    with pytest.raises(SingularMatrixError):
        similar_to_inverse(diag(F, [0, 1]))
    assert conjugator_between(diag(F, [2, 4]), diag(F, [2, 2])) is None
    assert similar(diag(F, [2, 4]), diag(F, [4, 2]))


def test_parse_canonical_rejects():
    with pytest.raises(ValueError):
        parse_canonical("poly[1,1]^1", GF(2))
