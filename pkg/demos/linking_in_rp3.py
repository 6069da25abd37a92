"""Linking numbers of curves in RP^3 are half-integers.

Two skew lines link with lk = 1/2: their preimages in S^3 are two Hopf
circles that each cover twice.
"""

from rlink import catalog
from rlink.linking import OSCULATING, lk, push_off, self_linking

A = catalog.line([1, 0, 0, 0], [0, 1, 0, 0])
B = catalog.line([0, 0, 1, 0], [0, 0, 0, 1])
print("two skew lines:       lk =", lk(A, B))
print("one line reversed:    lk =", lk(A.reversed(), B))

z_axis = catalog.line([1, 0, 0, 0], [0, 0, 0, 1])
print("axis through a loop:  lk =", lk(z_axis, catalog.round_circle([0, 0, 0], 1.0)))
print("axis beside a loop:   lk =", lk(z_axis, catalog.round_circle([3, 0, 0], 1.0)))

X = catalog.twisted_cubic()
print("twisted cubic with its own push-off:", lk(X, push_off(X, OSCULATING, eps=0.05)),
      "= osc =", self_linking(X))
