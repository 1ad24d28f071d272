"""Linear maps on M_n(F): checking preservation and recognizing standard forms."""
import numpy as np

from involkit.field import GF
from involkit.preserver import (exceptional_n2_map, map_from_closed_form, map_from_form,
                                preserves_set, random_pair_form, recognize_form)

F = GF(3)
rng = np.random.default_rng(0)
form = random_pair_form(F, 2, rng, det_product=1)
T = map_from_form(form)
print("form:", form.text())
print("preserves D exhaustively:", preserves_set(T, "D").preserved)
print("recognized back:", recognize_form(T).text())

# scaling by 2 sends I (det 1) outside D over GF(7)
S = map_from_closed_form(GF(7), 2, lambda X: X.scalar_mul(2))
rep = preserves_set(S, "D")
print("X -> 2X preserves D:", rep.preserved, "counterexample", rep.counterexample.text())

# the n = 2 map X -> -X + tr(X) I is a transposed conjugation in disguise
E = exceptional_n2_map(GF(5))
print("exceptional map:", recognize_form(E).text())
