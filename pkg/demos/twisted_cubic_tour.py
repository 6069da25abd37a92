"""A walk through the invariants of the twisted cubic and a few relatives.

Run with ``python3 demos/twisted_cubic_tour.py``.
"""

import numpy as np

from rlink import catalog
from rlink.algebra import DEFAULT_CONFIG
from rlink.curves import torsion_sign
from rlink.invariants import encomplexed_writhe, tightness_check, writhe_bound
from rlink.linking import Blackboard, HalfInt, blackboard_from_diagram, self_linking
from rlink.projection import build_diagram, generic_diagrams, klein_check

X = catalog.twisted_cubic()
print("twisted cubic, degree", X.degree)
print("  torsion sign:", torsion_sign(X))

# osc is the self-linking of the push-off along the principal normal
osc = self_linking(X)
print("  osc =", osc, " largest allowed:", HalfInt(X.degree * (X.degree - 2)))

# every projection of the twisted cubic is a nodal cubic; look at a few
for D in generic_diagrams(X, 3, DEFAULT_CONFIG, with_bitangents=True):
    c = D.census
    print(f"  center {np.round(D.center.point, 3)}: h={c.h} e={c.e} i={c.i}  "
          f"writhe={D.writhe}  {klein_check(D).line()}")

w = encomplexed_writhe(X)
print("  w =", w.value, "over", len(w.per_center), "centers; bound", writhe_bound(X))

# a center on a real secant gives a crossing; the blackboard framing then
# agrees with the crossing sign
p = X.point(-0.7) + 1.3 * X.point(0.9)
D = build_diagram(X, p)
print("  crunodal center: b_p from crossings =", blackboard_from_diagram(D),
      " from the Gauss integral =", self_linking(X, Blackboard(D.center)))

rep = tightness_check(X)
print("  tight:", rep.tight, " torsion agrees:", rep.torsion_positive,
      " crossing signs constant:", rep.sign_constancy)

print()
print("mirror image: osc =", self_linking(X.mirrored()),
      " w =", encomplexed_writhe(X.mirrored()).value)

for d in (4, 5):
    H = catalog.hyperboloid_curve(d)
    print(f"hyperboloid curve of degree {d}: osc = {self_linking(H)}, "
          f"w = {encomplexed_writhe(H, n_centers=4).value}")
