"""Rational canonical forms with an explicit conjugator."""
from involkit.canonical import rcf, similar_to_inverse
from involkit.matrix import conjugate, parse_matrix

A = parse_matrix("GF(2):[[1,1,0],[0,1,0],[0,0,1]]")
form, conj = rcf(A)
print("A =", A.text())
print("elementary divisors:", form.text())
print("P^-1 A P == block form:", conjugate(A, conj.P) == form.assemble())

# a matrix is similar to its inverse iff its divisors pair off with their reciprocals
for text in ["GF(7):[[2,0],[0,4]]", "GF(7):[[2,0],[0,2]]", "GF(5):[[0,4],[1,0]]"]:
    M = parse_matrix(text)
    print(text, "similar to inverse:", similar_to_inverse(M))
