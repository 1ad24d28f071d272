"""Rational canonical form in elementary-divisor shape.

Every square matrix over GF(q) is similar to a direct sum of companion
matrices of prime powers ``p^m``; the multiset of those powers is a complete
similarity invariant.  ``rcf`` also returns an explicit conjugator ``P`` with
``P A P^{-1}`` equal to the assembled block matrix.

The construction works one irreducible ``p`` at a time.  With ``N = p(A)``,
the block counts come from the ranks of ``N^m``.  Generators are chosen from
largest exponent down: a vector ``v`` of exponent ``m`` is accepted when its
socle image ``N^{m-1} v`` lies outside the span of the socles already chosen,
which is exactly the condition for the cyclic subspaces to form a direct sum.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import _linalg
from .field import FieldSpec
from .matrix import Matrix, SingularMatrixError, charpoly, companion, direct_sum
from .poly import Polynomial, factor, parse_poly


@dataclass(frozen=True)
class CanonicalForm:
    """Elementary divisors as ``(irreducible, exponent)`` pairs, canonically sorted."""

    spec: FieldSpec
    blocks: tuple[tuple[Polynomial, int], ...]

    @property
    def divisors(self) -> tuple[Polynomial, ...]:
        return tuple(p**m for p, m in self.blocks)

    @property
    def n(self) -> int:
        return sum(p.degree * m for p, m in self.blocks)

    def assemble(self) -> Matrix:
        return direct_sum(*(companion(f) for f in self.divisors))

    def text(self) -> str:
        return "rcf{" + ", ".join(f"{p.text()}^{m}" for p, m in self.blocks) + "}"

    def __str__(self):
        return ", ".join(f"({p})^{m}" if m > 1 else f"({p})" for p, m in self.blocks)


@dataclass(frozen=True)
class Conjugator:
    """Invertible ``P`` with ``P A P^{-1}`` equal to the assembled canonical form."""

    P: Matrix


def parse_canonical(text: str, spec: FieldSpec) -> CanonicalForm:
    text = text.strip()
    if not (text.startswith("rcf{") and text.endswith("}")):
        raise ValueError(f"bad canonical-form text {text!r}")
    body = text[4:-1].strip()
    blocks = []
    if body:
        for part in body.split(", "):
            base, exp = part.rsplit("^", 1)
            blocks.append((parse_poly(base, spec), int(exp)))
    return CanonicalForm(spec, _sorted_blocks(blocks))


def _sorted_blocks(blocks) -> tuple[tuple[Polynomial, int], ...]:
    return tuple(sorted(blocks, key=lambda b: (b[0].sort_key(), b[1])))


def _block_counts(A: Matrix, p: Polynomial, e: int) -> dict[int, int]:
    """Number of ``p^m`` blocks for each exponent ``m``."""
    s, n, d = A.spec, A.n, p.degree
    N = A.eval_poly(p)
    ranks = [n]
    M = N
    for _ in range(e):
        ranks.append(M.rank())
        if ranks[-1] == ranks[-2]:
            break
        M = M @ N
    at_least = [(ranks[m - 1] - ranks[m]) // d for m in range(1, len(ranks))] + [0]
    return {m + 1: at_least[m] - at_least[m + 1]
            for m in range(len(at_least) - 1) if at_least[m] - at_least[m + 1]}


@lru_cache(maxsize=1 << 16)
def elementary_divisors(A: Matrix) -> CanonicalForm:
    """Elementary divisors of ``A`` (ranks only, no conjugator)."""
    blocks = []
    for p, e in factor(charpoly(A)).factors:
        for m, count in _block_counts(A, p, e).items():
            blocks.extend([(p, m)] * count)
    return CanonicalForm(A.spec, _sorted_blocks(blocks))


def rcf(A: Matrix) -> tuple[CanonicalForm, Conjugator]:
    """Canonical form with a verified conjugator."""
    s, n = A.spec, A.n
    rows = A.rows
    gens: list[tuple[Polynomial, int, list[int]]] = []
    for p, e in factor(charpoly(A)).factors:
        d = p.degree
        counts = _block_counts(A, p, e)
        N = A.eval_poly(p)
        socle = _linalg.Echelon(s)
        for m in sorted(counts, reverse=True):
            need = counts[m]
            Nm = N**m
            Nm1 = N ** (m - 1)
            for v in _linalg.nullspace(s, Nm.to_lists(), n):
                if not need:
                    break
                w = _linalg.matvec(s, Nm1.rows, v)
                if not any(socle.reduce(w)):
                    continue
                for _ in range(d):
                    added = socle.add(w)
                    assert added, "socle of a cyclic p-primary block has dimension deg p"
                    w = _linalg.matvec(s, rows, w)
                gens.append((p, m, v))
                need -= 1
            assert need == 0, "ran out of generators"

    gens.sort(key=lambda g: (g[0].sort_key(), g[1]))
    columns = []
    for p, m, v in gens:
        w = v
        for _ in range(p.degree * m):
            columns.append(w)
            w = _linalg.matvec(s, rows, w)
    S = Matrix._raw(s, [list(r) for r in zip(*columns)])
    form = CanonicalForm(s, tuple((p, m) for p, m, _ in gens))
    B = form.assemble()
    if A @ S != S @ B:
        raise RuntimeError("canonical-form conjugator failed verification")
    try:
        P = S.inverse()
    except SingularMatrixError as exc:  # pragma: no cover - would be a bug
        raise RuntimeError("cyclic generators are dependent") from exc
    return form, Conjugator(P)


def similar(A: Matrix, B: Matrix) -> bool:
    if A.spec != B.spec or A.n != B.n:
        raise ValueError("similarity needs matrices of the same size and field")
    return elementary_divisors(A) == elementary_divisors(B)


def conjugator_between(A: Matrix, B: Matrix) -> Matrix | None:
    """``P`` with ``A = P B P^{-1}``, or ``None`` when not similar."""
    if not similar(A, B):
        return None
    _, ca = rcf(A)
    _, cb = rcf(B)
    return ca.P.inverse() @ cb.P


def similar_to_inverse(A: Matrix) -> bool:
    if not A.is_invertible():
        raise SingularMatrixError("similar_to_inverse needs an invertible matrix")
    return similar(A, A.inverse())
