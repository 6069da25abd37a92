"""Watch the invariants jump as a family of curves crosses a wall.

Three families are scanned: strands passing through each other, a pair of
conjugate points colliding, and the curvature vanishing at one point.
"""

import numpy as np

from rlink import catalog
from rlink.invariants import family_invariants, family_scan

for fam in (catalog.real_crossing_family(), catalog.solitary_node_family(),
            catalog.flat_point_family()):
    print(fam.label)
    for lam in np.linspace(*fam.lam_range, 5):
        v = family_invariants(fam, float(lam))
        shown = "not a smooth link" if v is None else f"w = {v[0]:+d}, osc = {v[1]}"
        print(f"  lambda = {lam:+.3f}: {shown}")
    for e in family_scan(fam, steps=12):
        print(f"  {e.kind.value} wall in [{e.lambda_lo:.6f}, {e.lambda_hi:.6f}]: "
              f"d_w = {e.d_wlambda:+d}, d_osc = {e.d_osc}")
    print()
