"""Finite fields, polynomials and factorization."""
from involkit.field import GF
from involkit.poly import Polynomial, factor, is_self_reciprocal, reciprocal

# GF(9) is built as GF(3)[t]/(m(t)); elements print as coefficient lists
F9 = GF(9)
print(F9, "modulus", F9.modulus_coeffs)
order = lambda a: next(k for k in range(1, 9) if a ** k == 1)
g = next(a for a in F9.enumerate_all() if not a.is_zero() and order(a) == 8)
print("a generator of GF(9)*:", g, "order", order(g))

# x^8 - 1 splits into linear factors over GF(9) but not over GF(3)
F3 = GF(3)
f = Polynomial(F3, [-1, 0, 0, 0, 0, 0, 0, 0, 1])
print("x^8-1 over GF(3):", factor(f))

# the reciprocal polynomial matters for similarity to the inverse
h = Polynomial(GF(5), [2, 1, 1])
print(h, "reciprocal", reciprocal(h), "self-reciprocal:", is_self_reciprocal(h))
