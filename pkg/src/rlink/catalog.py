"""Named example curves and one-parameter families."""

from math import comb

import numpy as np

from .curves import ParamPlaneCurve, ParamSpaceCurve
from .invariants import FamilySpec


def twisted_cubic():
    """(s^3 : s^2 t : s t^2 : t^3); torsion is the constant 12."""
    return ParamSpaceCurve(np.eye(4), label="twisted cubic")


def line(a, b, label="line"):
    """The real line through points a and b, parametrized as s*a + t*b."""
    return ParamSpaceCurve(np.column_stack([a, b]).astype(float), label=label)


def round_circle(center, radius, axes=((1, 0, 0), (0, 1, 0)), label="circle"):
    """A round circle in the affine chart x0 = 1, as a conic."""
    c = np.asarray(center, dtype=float)
    u, v = (np.asarray(a, dtype=float) for a in axes)
    rows = np.zeros((4, 3))
    rows[0] = [1, 0, 1]                    # s^2 + t^2
    rows[1:] = (np.outer(c, [1, 0, 1]) + radius * np.outer(u, [1, 0, -1])
                + radius * np.outer(v, [0, 2, 0]))
    return ParamSpaceCurve(rows, label=label)


def kostlan_curve(d, rng, label=""):
    """Random curve with coefficients N(0, binom(d, j)); invariant under rotations of (s, t)."""
    scale = np.sqrt([comb(d, j) for j in range(d + 1)])
    return ParamSpaceCurve(rng.standard_normal((4, d + 1)) * scale, label=label or f"random degree {d}")


def random_smooth_curve(d, rng, tries=50):
    """Kostlan curve whose real locus passes the smoothness check."""
    from .curves import validate_smooth_link
    for _ in range(tries):
        X = kostlan_curve(d, rng)
        if validate_smooth_link(X).ok:
            return X
    raise RuntimeError("no smooth curve found")


def hyperboloid_curve(d):
    """Curve of bidegree (1, d-1) on the quadric x0 x3 = x1 x2 (up to signs).

    X = (s f, s g, t f, t g) with f + i g = (s + i t)^(d-1).  These reach
    |osc| = d(d-2)/2 and |w| = (d-1)(d-2)/2.
    """
    m = d - 1
    z = np.array([comb(m, j) * 1j ** j for j in range(m + 1)])
    c = np.zeros((4, d + 1))
    c[0, :m + 1] = z.real
    c[1, :m + 1] = z.imag
    c[2, 1:] = z.real
    c[3, 1:] = z.imag
    return ParamSpaceCurve(c, label=f"hyperboloid degree {d}")


def mixed_sign_quartic():
    """A smooth quartic with a diagram whose crossings have both signs."""
    c = [[3, -2, 0, 0, -1], [1, -2, 2, 2, -2], [0, -1, -3, 2, 0], [-2, 1, -2, 2, -2]]
    return ParamSpaceCurve(np.array(c, dtype=float), label="mixed-sign quartic")


# plane curves


def conic():
    return ParamPlaneCurve(np.eye(3), label="conic")


def crunodal_cubic():
    """(t^2 - 1, t^3 - t): a real node with two real branches at t = +-1."""
    rows = np.array([[1, 0, 0, 0], [-1, 0, 1, 0], [0, -1, 0, 1]], dtype=float)
    return ParamPlaneCurve(rows, label="crunodal cubic")


def acnodal_cubic():
    """(t^2 + 1, t^3 + t): an isolated real point from t = +-i."""
    rows = np.array([[1, 0, 0, 0], [1, 0, 1, 0], [0, 1, 0, 1]], dtype=float)
    return ParamPlaneCurve(rows, label="acnodal cubic")


# families


def _family(base, slope, lam_range, label):
    return FamilySpec(np.stack([np.asarray(base, float), np.asarray(slope, float)], axis=2),
                      lam_range, label=label)


_QUARTIC_LIFT = np.zeros((4, 5))
_QUARTIC_LIFT[3, 1] = 1.0     # lambda * s^3 t in the last row


def real_crossing_family(lam_range=(-0.37, 0.41)):
    """(t^2 - 1, t^3 - t, t^4 + lambda t): strands t = +-1 pass through each other at 0."""
    base = [[1, 0, 0, 0, 0], [-1, 0, 1, 0, 0], [0, -1, 0, 1, 0], [0, 0, 0, 0, 1]]
    return _family(base, _QUARTIC_LIFT, lam_range, "real crossing family")


def solitary_node_family(lam_range=(-0.37, 0.41)):
    """(t^2 + 1, t^3 + t, t^4 + lambda t): the conjugate points t = +-i meet at 0."""
    base = [[1, 0, 0, 0, 0], [1, 0, 1, 0, 0], [0, 1, 0, 1, 0], [0, 0, 0, 0, 1]]
    return _family(base, _QUARTIC_LIFT, lam_range, "solitary node family")


def flat_point_family(lam_range=(-0.37, 0.41)):
    """Near t = 0 the curve is (t, t^3, lambda t^2 + t^4) up to higher terms.

    At lambda = 0 the curvature vanishes at t = 0 and the principal normal
    flips to the other side of the tangent.
    """
    base = [[1, 0, -0.5, 0, 0.5], [0, 1, 0, -0.5, -0.5], [0, 0, 0, 1, 0.5], [0, 0, 0, 0, 1]]
    slope = np.zeros((4, 5))
    slope[3, 2] = 1.0
    return _family(base, slope, lam_range, "flat point family")
