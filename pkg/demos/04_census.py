"""Exhaustive census: close the involutions under products and compare with the characterizations."""
import time

from involkit.field import GF
from involkit.involution import enumerate_involutions, involution_count, product_sets

for q, n in [(2, 2), (3, 2), (2, 3), (3, 3)]:
    F = GF(q)
    t0 = time.perf_counter()
    invs = enumerate_involutions(F, n)
    B, C, D = product_sets(F, n)
    dt = time.perf_counter() - t0
    assert len(invs) == involution_count(F, n)
    print(f"GF({q}) n={n}: involutions={len(invs):4d} |B|={len(B):6d} |C|={len(C):6d} "
          f"|D|={len(D):6d}  ({dt:.2f}s)")
