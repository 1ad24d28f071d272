"""Gaussian elimination on lists of field codes.

Rows are plain lists of ints interpreted through a ``FieldSpec``; nothing
here allocates ``FieldElement`` objects.
"""
from __future__ import annotations

from .field import FieldSpec


def rref(spec: FieldSpec, rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form and pivot columns. Does not mutate ``rows``."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    add, mul, neg, inv = spec.add, spec.mul, spec.neg, spec.inv
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        row = m[r]
        f = inv(row[c])
        if f != 1:
            row = m[r] = [mul(x, f) for x in row]
        for i in range(len(m)):
            if i != r and m[i][c]:
                g = neg(m[i][c])
                other = m[i]
                m[i] = [add(x, mul(g, y)) if y else x for x, y in zip(other, row)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(spec: FieldSpec, rows: list[list[int]]) -> int:
    return len(rref(spec, rows)[1])


def nullspace(spec: FieldSpec, rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Basis of ``{v : rows @ v = 0}`` as a list of column vectors."""
    if not rows:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    m, pivots = rref(spec, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = spec.neg(m[r][fc])
        basis.append(v)
    return basis


def det(spec: FieldSpec, rows: list[list[int]]) -> int:
    m = [list(r) for r in rows]
    n = len(m)
    result = 1
    add, mul, neg, inv = spec.add, spec.mul, spec.neg, spec.inv
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = neg(result)
        pc = m[c][c]
        result = mul(result, pc)
        pinv = inv(pc)
        for i in range(c + 1, n):
            if m[i][c]:
                g = neg(mul(m[i][c], pinv))
                m[i] = [add(x, mul(g, y)) if y else x for x, y in zip(m[i], m[c])]
    return result


def inverse(spec: FieldSpec, rows: list[list[int]]) -> list[list[int]] | None:
    n = len(rows)
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(rows)]
    m, pivots = rref(spec, aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        return None
    return [row[n:] for row in m]


def matmul(spec: FieldSpec, a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    add, mul = spec.add, spec.mul
    cols = list(zip(*b))
    out = []
    for row in a:
        out_row = []
        for col in cols:
            acc = 0
            for x, y in zip(row, col):
                if x and y:
                    acc = add(acc, mul(x, y))
            out_row.append(acc)
        out.append(out_row)
    return out


def matvec(spec: FieldSpec, a, v: list[int]) -> list[int]:
    add, mul = spec.add, spec.mul
    out = []
    for row in a:
        acc = 0
        for x, y in zip(row, v):
            if x and y:
                acc = add(acc, mul(x, y))
        out.append(acc)
    return out


class Echelon:
    """Incrementally maintained row-echelon basis of a subspace."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.rows: list[tuple[int, list[int]]] = []  # (pivot, normalized row)

    def reduce(self, v: list[int]) -> list[int]:
        s = self.spec
        v = list(v)
        for pc, row in self.rows:
            c = v[pc]
            if c:
                g = s.neg(c)
                v = [s.add(x, s.mul(g, y)) if y else x for x, y in zip(v, row)]
        return v

    def add(self, v: list[int]) -> bool:
        """Insert ``v``; return False if it was already in the span."""
        v = self.reduce(v)
        pc = next((i for i, x in enumerate(v) if x), None)
        if pc is None:
            return False
        s = self.spec
        f = s.inv(v[pc])
        v = [s.mul(x, f) for x in v]
        self.rows.append((pc, v))
        return True

    def __len__(self):
        return len(self.rows)
