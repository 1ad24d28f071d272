"""Finite fields GF(p^k).

Elements are stored as integer codes ``c0 + c1*p + ... + c_{k-1}*p^(k-1)``
where ``(c0, ..., c_{k-1})`` are the coefficients of the representative
polynomial in the generator ``u``.  The matrix and polynomial layers work on
these codes directly through the ``FieldSpec`` primitives (``add``, ``mul``,
...); ``FieldElement`` is the public value type wrapping one code.
"""
from __future__ import annotations

import re
from functools import cached_property
from typing import Iterable, Sequence

from ._config import MAX_FIELD_SIZE

_TABLE_LIMIT = 1024


class FieldMismatchError(ValueError):
    """Operands belong to different fields."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_power(q: int) -> tuple[int, int] | None:
    for p in range(2, q + 1):
        if q % p == 0:
            if not is_prime(p):
                return None
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            return (p, k) if r == 1 else None
    return None


class FieldSpec:
    """The field GF(p^k) presented as GF(p)[u] / (modulus).

    Immutable; equality is by ``(p, k, modulus)``.
    """

    __slots__ = ("p", "k", "q", "modulus_coeffs", "_tables", "__dict__")

    def __init__(self, p: int, k: int, modulus_coeffs: Sequence[int]):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus_coeffs = tuple(int(c) % p for c in modulus_coeffs)
        self._tables = None
        if k > 1 and self.q <= _TABLE_LIMIT:
            self._build_tables()

    # -- identity -----------------------------------------------------------
    def __eq__(self, other):
        return (isinstance(other, FieldSpec) and self.p == other.p
                and self.k == other.k
                and self.modulus_coeffs == other.modulus_coeffs)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus_coeffs))

    def __repr__(self):
        return f"FieldSpec({self.header()})"

    def __str__(self):
        return self.header()

    def header(self, with_modulus: bool | None = None) -> str:
        """Text header ``GF(p)`` / ``GF(p^k)``, optionally with ``;mod=[...]``."""
        base = f"GF({self.p})" if self.k == 1 else f"GF({self.p}^{self.k})"
        if with_modulus is None:
            with_modulus = self.k > 1 and self.modulus_coeffs != _default_modulus(self.p, self.k)
        if with_modulus:
            base += ";mod=[" + ",".join(map(str, self.modulus_coeffs)) + "]"
        return base

    # -- code <-> coefficient vectors ---------------------------------------
    def digits(self, code: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.k):
            code, r = divmod(code, p)
            out.append(r)
        return tuple(out)

    def undigits(self, coeffs: Sequence[int]) -> int:
        code = 0
        for c in reversed(coeffs):
            code = code * self.p + (int(c) % self.p)
        return code

    def _poly_mulmod(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        mod = self.modulus_coeffs  # monic, length k+1
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod[deg]
            if c:
                for i in range(k + 1):
                    prod[deg - k + i] = (prod[deg - k + i] - c * mod[i]) % p
        return self.undigits(prod[:k])

    def _build_tables(self):
        q, p = self.q, self.p
        digs = [self.digits(c) for c in range(q)]
        add = [[self.undigits([(x + y) % p for x, y in zip(digs[a], digs[b])])
                for b in range(q)] for a in range(q)]
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(a, q):
                mul[a][b] = mul[b][a] = self._poly_mulmod(a, b)
        neg = [self.undigits([(-x) % p for x in digs[a]]) for a in range(q)]
        inv = [0] * q
        for a in range(1, q):
            row = mul[a]
            inv[a] = row.index(1)
        self._tables = (add, mul, neg, inv)

    # -- primitive operations on codes --------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self._tables:
            return self._tables[0][a][b]
        p = self.p
        return self.undigits([(x + y) % p for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        if self._tables:
            return self._tables[2][a]
        return self.undigits([(-x) % self.p for x in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        if self._tables:
            return self._tables[1][a][b]
        return self._poly_mulmod(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + self.header())
        if self.k == 1:
            return pow(a, -1, self.p)
        if self._tables:
            return self._tables[3][a]
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if self.k == 1:
            return pow(a, e, self.p)
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def code_of_int(self, n: int) -> int:
        return int(n) % self.p

    # -- element-level API ----------------------------------------------------
    def __call__(self, value) -> "FieldElement":
        return self.element(value)

    def element(self, value) -> "FieldElement":
        """Coerce an int (image of n*1), a coefficient list, or an element."""
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise FieldMismatchError(f"{value.spec} element used in {self}")
            return value
        if isinstance(value, (list, tuple)):
            if len(value) > self.k:
                raise ValueError(f"too many coefficients for {self}")
            return FieldElement(self, self.undigits(list(value)))
        return FieldElement(self, self.code_of_int(value))

    def from_integer(self, n: int) -> "FieldElement":
        return FieldElement(self, self.code_of_int(n))

    def from_code(self, code: int) -> "FieldElement":
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} outside {self}")
        return FieldElement(self, code)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def size(self) -> int:
        return self.q

    def enumerate_all(self) -> list["FieldElement"]:
        """All elements, in increasing code order (0, 1, ..., p-1, u, 1+u, ...)."""
        return [FieldElement(self, c) for c in range(self.q)]

    @cached_property
    def modulus(self):
        """The defining polynomial, as a polynomial over the prime field."""
        from .poly import Polynomial
        return Polynomial(prime_field(self.p), list(self.modulus_coeffs))

    @property
    def prime_subfield(self) -> "FieldSpec":
        return prime_field(self.p)

    def parse_element(self, text) -> "FieldElement":
        """Parse ``5`` / ``-1`` (prime field) or ``[1,1]`` (coefficients in u)."""
        if isinstance(text, str):
            text = text.strip()
            if text.startswith("["):
                body = text[1:-1].strip()
                vals = [int(t) for t in body.split(",")] if body else []
                return self.element(vals)
            return self.element(int(text))
        return self.element(text)

    def format_code(self, code: int) -> str:
        if self.k == 1:
            return str(code)
        return "[" + ",".join(map(str, self.digits(code))) + "]"


class FieldElement:
    """An element of a ``FieldSpec``; a pure value."""

    __slots__ = ("spec", "code")

    def __init__(self, spec: FieldSpec, code: int):
        self.spec = spec
        self.code = code

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.spec.digits(self.code)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldMismatchError(f"cannot mix {self.spec} and {other.spec}")
            return other.code
        if isinstance(other, int):
            return self.spec.code_of_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.sub(self.code, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.sub(b, self.code))

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.mul(self.code, self.spec.inv(b)))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.mul(b, self.spec.inv(self.code)))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.code))

    def __pow__(self, e: int):
        return FieldElement(self.spec, self.spec.pow(self.code, e))

    def inv(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.inv(self.code))

    def is_zero(self) -> bool:
        return self.code == 0

    def __bool__(self):
        return self.code != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.spec == other.spec and self.code == other.code
        if isinstance(other, int):
            return self.code == self.spec.code_of_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.spec, self.code))

    def __int__(self):
        if self.spec.k != 1:
            raise TypeError("only prime-field elements convert to int")
        return self.code

    def __str__(self):
        return self.spec.format_code(self.code)

    def __repr__(self):
        return f"{self.spec.header()}({self})"


# -- construction -------------------------------------------------------------

_FIELD_CACHE: dict[tuple, FieldSpec] = {}
_DEFAULT_MOD: dict[tuple[int, int], tuple[int, ...]] = {}


def prime_field(p: int) -> FieldSpec:
    key = (p, 1, (0, 1))
    if key not in _FIELD_CACHE:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        _FIELD_CACHE[key] = FieldSpec(p, 1, (0, 1))
    return _FIELD_CACHE[key]


def _monic_candidates(p: int, k: int) -> Iterable[list[int]]:
    # ascending coefficient vectors, constant term most significant
    for idx in range(p**k):
        digits = []
        for _ in range(k):
            idx, r = divmod(idx, p)
            digits.append(r)
        yield list(reversed(digits)) + [1]


def _default_modulus(p: int, k: int) -> tuple[int, ...]:
    if k == 1:
        return (0, 1)
    if (p, k) not in _DEFAULT_MOD:
        from .poly import Polynomial, is_irreducible
        base = prime_field(p)
        for coeffs in _monic_candidates(p, k):
            if coeffs[0] == 0:
                continue
            if is_irreducible(Polynomial(base, coeffs)):
                _DEFAULT_MOD[(p, k)] = tuple(coeffs)
                break
    return _DEFAULT_MOD[(p, k)]


def field_make(p: int, k: int = 1, modulus=None) -> FieldSpec:
    """Build GF(p^k).

    Without ``modulus`` the lexicographically smallest monic irreducible of
    degree ``k`` is used, comparing coefficient vectors from the constant
    term upward.  ``modulus`` may be a coefficient list (ascending) or a
    polynomial over GF(p).
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError("extension degree must be >= 1")
    if p**k > MAX_FIELD_SIZE:
        raise ValueError(f"GF({p}^{k}) exceeds the supported size {MAX_FIELD_SIZE}")
    if modulus is None:
        coeffs = _default_modulus(p, k)
    else:
        from .poly import Polynomial, is_irreducible
        if isinstance(modulus, Polynomial):
            if modulus.spec.p != p or modulus.spec.k != 1:
                raise ValueError("modulus must be a polynomial over GF(p)")
            coeffs = tuple(modulus.coeffs)
        else:
            coeffs = tuple(int(c) % p for c in modulus)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        poly = Polynomial(prime_field(p), list(coeffs))
        if poly.degree != k:
            raise ValueError(f"modulus must have degree {k}")
        if not poly.is_monic():
            raise ValueError("modulus must be monic")
        if k == 1:
            coeffs = (0, 1)
        elif not is_irreducible(poly):
            raise ValueError("modulus is reducible")
    key = (p, k, coeffs)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = FieldSpec(p, k, coeffs)
    return _FIELD_CACHE[key]


def GF(q: int, modulus=None) -> FieldSpec:
    """Shorthand: ``GF(4)`` is ``field_make(2, 2)``."""
    pk = _prime_power(q)
    if pk is None:
        raise ValueError(f"{q} is not a prime power")
    return field_make(pk[0], pk[1], modulus)


_HEADER = re.compile(r"^\s*GF\(\s*(\d+)\s*(?:\^\s*(\d+)\s*)?\)\s*(?:;\s*mod\s*=\s*\[([^\]]*)\])?\s*$")


def parse_field(text: str) -> FieldSpec:
    """Parse ``GF(p)``, ``GF(p^k)``, ``GF(q)`` or ``GF(p^k);mod=[c0,...,ck]``."""
    m = _HEADER.match(text)
    if not m:
        raise ValueError(f"bad field header {text!r}")
    base, exp, mod = m.groups()
    mod_coeffs = [int(t) for t in mod.split(",")] if mod else None
    if exp is None:
        pk = _prime_power(int(base))
        if pk is None:
            raise ValueError(f"{base} is not a prime power")
        return field_make(pk[0], pk[1], mod_coeffs)
    return field_make(int(base), int(exp), mod_coeffs)


def enumerate_all(spec: FieldSpec) -> list[FieldElement]:
    return spec.enumerate_all()


def char_of(spec: FieldSpec) -> int:
    return spec.p


def is_char_two(spec: FieldSpec) -> bool:
    return spec.p == 2


def field_size(spec: FieldSpec) -> int:
    return spec.q
