"""Deciding membership in products of 2, 3, 4 involutions, with certificates."""
from involkit.involution import SetId, in_set, k_involutions_search, two_involutions
from involkit.matrix import parse_matrix

samples = ["GF(3):[[0,1],[1,1]]", "GF(7):[[2,0],[0,4]]", "GF(7):[[2,0,0],[0,2,0],[0,0,2]]",
           "GF(5):[[1,1,0],[0,1,1],[0,0,1]]"]
for text in samples:
    A = parse_matrix(text)
    row = {w.name: in_set(A, w).member for w in SetId}
    print(text, row)

# a product of two involutions comes with its two factors
A = parse_matrix("GF(7):[[2,0],[0,4]]")
fac = two_involutions(A)
print("A = J1 J2 with", fac.text(), "verified:", fac.verify())

# det = -1 needs more factors; search for a product of four
A = parse_matrix("GF(3):[[0,1],[1,1]]")
fac = k_involutions_search(A, 4)
print("four involutions:", fac.text() if fac else None)
