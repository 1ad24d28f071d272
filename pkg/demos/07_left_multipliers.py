"""Matrices A with A C = C, where C is the set of products of three involutions."""
from involkit.field import GF
from involkit.involution import in_D, lambda_census, lambda_member
from involkit.matrix import parse_matrix

for q, n in [(3, 2), (2, 3)]:
    F = GF(q)
    L = lambda_census(F, n)
    print(f"GF({q}) n={n}: {len(L)} left multipliers, all with det^2=1:",
          all(in_D(A).member for A in L))

for text in ["GF(7):[[6,0,0],[0,6,0],[0,0,6]]", "GF(7):[[1,0,0],[0,1,0],[0,0,6]]"]:
    print(text, "left multiplier:", lambda_member(parse_matrix(text)))
