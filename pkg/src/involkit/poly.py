"""Univariate polynomials over a finite field.

Coefficients are field codes (see :mod:`involkit.field`) in ascending degree
with trailing zeros stripped; the zero polynomial has no coefficients.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Sequence

from .field import FieldElement, FieldMismatchError, FieldSpec


def _strip(coeffs: list[int]) -> tuple[int, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class Polynomial:
    """An element of GF(q)[x]. Immutable."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: FieldSpec, coeffs: Sequence = ()):
        self.spec = spec
        codes = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                if c.spec != spec:
                    raise FieldMismatchError(f"{c.spec} coefficient in polynomial over {spec}")
                codes.append(c.code)
            else:
                codes.append(spec.element(c).code)
        self.coeffs = _strip(codes)

    @classmethod
    def _raw(cls, spec: FieldSpec, codes) -> "Polynomial":
        obj = cls.__new__(cls)
        obj.spec = spec
        obj.coeffs = _strip(list(codes))
        return obj

    @classmethod
    def x(cls, spec: FieldSpec) -> "Polynomial":
        return cls._raw(spec, [0, 1])

    @classmethod
    def constant(cls, spec: FieldSpec, c) -> "Polynomial":
        return cls(spec, [c])

    @classmethod
    def from_roots(cls, spec: FieldSpec, roots) -> "Polynomial":
        out = cls.constant(spec, 1)
        for r in roots:
            out = out * cls(spec, [-spec.element(r), 1])
        return out

    # -- basic structure ------------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i: int) -> FieldElement:
        code = self.coeffs[i] if 0 <= i < len(self.coeffs) else 0
        return FieldElement(self.spec, code)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def leading(self) -> FieldElement:
        return self[self.degree]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def make_monic(self) -> "Polynomial":
        if not self.coeffs:
            raise ZeroDivisionError("zero polynomial has no leading coefficient")
        s = self.spec
        lc_inv = s.inv(self.coeffs[-1])
        return Polynomial._raw(s, [s.mul(c, lc_inv) for c in self.coeffs])

    def _check(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.spec != self.spec:
                raise FieldMismatchError(f"cannot mix {self.spec} and {other.spec} polynomials")
            return other
        if isinstance(other, (int, FieldElement)):
            return Polynomial(self.spec, [other])
        return NotImplemented

    # -- ring operations -------------------------------------------------------
    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        s, a, b = self.spec, self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = s.add(out[i], c)
        return Polynomial._raw(s, out)

    __radd__ = __add__

    def __neg__(self):
        s = self.spec
        return Polynomial._raw(s, [s.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        s, a, b = self.spec, self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial._raw(s, [])
        out = [0] * (len(a) + len(b) - 1)
        add, mul = s.add, s.mul
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = add(out[i + j], mul(x, y))
        return Polynomial._raw(s, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial._raw(self.spec, [1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        s = self.spec
        rem = list(self.coeffs)
        db = other.degree
        lc_inv = s.inv(other.coeffs[-1])
        quot = [0] * max(len(rem) - db, 0)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            f = s.mul(c, lc_inv)
            quot[i - db] = f
            for j, bc in enumerate(other.coeffs):
                rem[i - db + j] = s.sub(rem[i - db + j], s.mul(f, bc))
        return Polynomial._raw(s, quot), Polynomial._raw(s, rem[:db] if db > 0 else [])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.spec == other.spec and self.coeffs == other.coeffs
        if isinstance(other, (int, FieldElement)):
            return self == Polynomial(self.spec, [other])
        return NotImplemented

    def __hash__(self):
        return hash((self.spec, self.coeffs))

    def __call__(self, value):
        """Evaluate at a field element (Horner)."""
        s = self.spec
        x = s.element(value).code
        acc = 0
        for c in reversed(self.coeffs):
            acc = s.add(s.mul(acc, x), c)
        return FieldElement(s, acc)

    def derivative(self) -> "Polynomial":
        s = self.spec
        return Polynomial._raw(s, [s.mul(s.code_of_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def sort_key(self) -> tuple:
        return (self.degree, self.coeffs)

    # -- text -------------------------------------------------------------------
    def text(self) -> str:
        """Machine form ``poly[c0,c1,...]``."""
        return "poly[" + ",".join(self.spec.format_code(c) for c in self.coeffs) + "]"

    def __repr__(self):
        return self.text()

    def __str__(self):
        """Pretty form, e.g. ``x^2+3x+2``."""
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            cs = self.spec.format_code(c)
            if i == 0:
                terms.append(cs)
            else:
                mono = "x" if i == 1 else f"x^{i}"
                terms.append(mono if c == 1 else cs + mono)
        return "+".join(terms)


def parse_poly(text: str, spec: FieldSpec) -> Polynomial:
    """Inverse of :meth:`Polynomial.text`."""
    text = text.strip()
    if not (text.startswith("poly[") and text.endswith("]")):
        raise ValueError(f"bad polynomial text {text!r}")
    values = json.loads(text[4:])
    return Polynomial(spec, [spec.element(v) for v in values])


# -- gcd and friends --------------------------------------------------------------

def gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd (zero if both inputs are zero)."""
    while b:
        a, b = b, a % b
    return a.make_monic() if a else a


def lcm(a: Polynomial, b: Polynomial) -> Polynomial:
    if not a or not b:
        return Polynomial._raw(a.spec, [])
    return (a * b // gcd(a, b)).make_monic()


# -- reciprocal polynomials ---------------------------------------------------------

def _require_reciprocable(f: Polynomial) -> None:
    if not f.is_monic():
        raise ValueError(f"{f} is not monic")
    if f.coeffs[0] == 0:
        raise ValueError(f"{f} has zero constant term")


def reciprocal(f: Polynomial) -> Polynomial:
    """``a0^{-1} x^n f(1/x)`` for monic ``f`` with ``f(0) != 0``."""
    _require_reciprocable(f)
    s = f.spec
    a0_inv = s.inv(f.coeffs[0])
    return Polynomial._raw(s, [s.mul(a0_inv, c) for c in reversed(f.coeffs)])


def is_self_reciprocal(f: Polynomial) -> bool:
    """Coefficient test: ``a0^2 = 1`` and ``a_{n-k} = a0^{-1} a_k`` for 0<k<n."""
    _require_reciprocable(f)
    s = f.spec
    a = f.coeffs
    n = f.degree
    a0 = a[0]
    if s.mul(a0, a0) != 1:
        return False
    a0_inv = s.inv(a0)
    return all(a[n - k] == s.mul(a0_inv, a[k]) for k in range(1, n))


# -- factorization ---------------------------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    """``unit * prod(f**m for f, m in factors)``; factors monic, irreducible, sorted."""

    factors: tuple[tuple[Polynomial, int], ...]
    unit: FieldElement

    def expand(self) -> Polynomial:
        out = Polynomial(self.unit.spec, [self.unit])
        for f, m in self.factors:
            out = out * f**m
        return out

    def __str__(self):
        parts = [f"({f})" + (f"^{m}" if m > 1 else "") for f, m in self.factors]
        if self.unit != 1 or not parts:
            parts.insert(0, str(self.unit))
        return "*".join(parts)


@lru_cache(maxsize=None)
def monic_irreducibles(spec: FieldSpec, degree: int) -> tuple[Polynomial, ...]:
    """All monic irreducibles of the given degree, in sort-key order.

    Built recursively: a monic polynomial of degree d is irreducible iff no
    irreducible of degree <= d/2 divides it.
    """
    if degree < 1:
        return ()
    q = spec.q
    out = []
    for tail in product(range(q), repeat=degree):
        f = Polynomial._raw(spec, list(reversed(tail)) + [1])
        if degree > 1 and f.coeffs[0] == 0:
            continue
        if _has_small_factor(f):
            continue
        out.append(f)
    out.sort(key=Polynomial.sort_key)
    return tuple(out)


def _has_small_factor(f: Polynomial) -> bool:
    for d in range(1, f.degree // 2 + 1):
        for g in monic_irreducibles(f.spec, d):
            if not (f % g):
                return True
    return False


def is_irreducible(f: Polynomial) -> bool:
    if not f:
        raise ValueError("zero polynomial")
    if f.degree < 1:
        return False
    return not _has_small_factor(f.make_monic())


def factor(f: Polynomial) -> Factorization:
    """Complete factorization by trial division against monic irreducibles."""
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    spec = f.spec
    unit = f.leading()
    g = f.make_monic()
    found: list[tuple[Polynomial, int]] = []
    d = 1
    while 2 * d <= g.degree:
        for h in monic_irreducibles(spec, d):
            m = 0
            while True:
                quo, rem = divmod(g, h)
                if rem:
                    break
                g, m = quo, m + 1
            if m:
                found.append((h, m))
        d += 1
    if g.degree >= 1:
        for i, (h, m) in enumerate(found):
            if h == g:
                found[i] = (h, m + 1)
                break
        else:
            found.append((g, 1))
    found.sort(key=lambda fm: fm[0].sort_key())
    return Factorization(tuple(found), unit)


def power_of_self_reciprocal_irreducible(f: Polynomial) -> bool:
    """True iff ``f`` is a power of a single self-reciprocal irreducible."""
    _require_reciprocable(f)
    fac = factor(f)
    return len(fac.factors) == 1 and is_self_reciprocal(fac.factors[0][0])
