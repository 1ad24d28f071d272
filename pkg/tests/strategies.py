"""Hypothesis strategies shared by the test modules."""
from hypothesis import strategies as st

from involkit.field import GF
from involkit.matrix import Matrix
from involkit.poly import Polynomial

SMALL_FIELDS = [GF(2), GF(3), GF(4), GF(5), GF(7), GF(8), GF(9)]
ODD_FIELDS = [F for F in SMALL_FIELDS if F.p != 2]

fields = st.sampled_from(SMALL_FIELDS)


def codes(spec):
    return st.integers(0, spec.q - 1)


def matrices(spec, n):
    row = st.lists(codes(spec), min_size=n, max_size=n)
    return st.lists(row, min_size=n, max_size=n).map(lambda rows: Matrix._raw(spec, rows))


def invertible(spec, n):
    return matrices(spec, n).filter(lambda M: M.is_invertible())


def polys(spec, max_degree=5):
    return st.lists(codes(spec), max_size=max_degree + 1).map(lambda c: Polynomial(spec, c))


def monic(spec, min_degree=1, max_degree=4, unit_constant=False):
    def build(tail):
        if unit_constant and tail[0] == 0:
            tail = [1] + tail[1:]
        return Polynomial(spec, tail + [1])
    return st.integers(min_degree, max_degree).flatmap(
        lambda d: st.lists(codes(spec), min_size=d, max_size=d)).map(build)


@st.composite
def field_and_matrix(draw, max_n=4, pred=None, fields_=SMALL_FIELDS):
    F = draw(st.sampled_from(fields_))
    n = draw(st.integers(1, max_n))
    strat = matrices(F, n)
    if pred is not None:
        strat = strat.filter(pred)
    return draw(strat)
