"""Explicit witnesses: X in B whose image r A X, or A(I+N), falls outside B."""
from involkit.field import GF
from involkit.involution import (in_B, quadratic_block, witness_three, witness_two,
                                 witness_type1, witness_type2)
from involkit.matrix import companion, direct_sum, identity, scalar
from involkit.poly import Polynomial, reciprocal

F = GF(5)
a1, r = F(0), F(2)
X = witness_two(a1, r)
A = quadratic_block(a1)
print("witness_two X =", X.text(), "X in B:", in_B(X).member,
      "rAX in B:", in_B(A.scalar_mul(r) @ X).member)

F7 = GF(7)
X = witness_three(F7(2), -1, F7(3))
A = direct_sum(quadratic_block(F7(2)), scalar(F7, -1, 1))
print("witness_three X =", X.text(), "rAX in B:", in_B(A.scalar_mul(F7(3)) @ X).member)

# nilpotent perturbations of companion matrices
f = Polynomial(F, [1, 3, 3, 1])
N = witness_type1(f)
print("type1 for (x+1)^3: N =", N.text(),
      "C_f in B:", in_B(companion(f)).member,
      "C_f(I+N) in B:", in_B(companion(f) @ (identity(F, 3) + N)).member)

g = Polynomial(F, [2, 0, 1])
N = witness_type2(g)
A = direct_sum(companion(g), companion(reciprocal(g)))
print("type2 for x^2+2: A(I+N) in B:", in_B(A @ (identity(F, 4) + N)).member)

# a self-reciprocal g that is not a power of a self-reciprocal irreducible
# can defeat this construction; x^2+1 over GF(5) does
try:
    witness_type2(Polynomial(F, [1, 0, 1]))
except RuntimeError as exc:
    print("type2 for x^2+1:", exc)
