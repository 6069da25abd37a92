"""Real rational curves in RP^3 (and RP^2) and their pointwise geometry.

A curve of degree d is stored as coefficient rows ``c[k, j]`` of the binary
forms ``X_k(s, t) = sum_j c[k, j] s^(d-j) t^j``.  The parameter ``t`` is the
affine chart s = 1; ``t = inf`` is the point (s, t) = (0, 1).
"""

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from .algebra import (DEFAULT_CONFIG, form_real_roots, form_roots, secant_pairs,
                      wronskian, wronskian_minors)
from .errors import (CurvatureVanishes, DegenerateCurve, NoConvergence,
                     PlaneContainsCurve, SamplingTooCoarse)


# ---------------------------------------------------------------------------
# evaluation on the parameter circle (s, t) = (cos a, sin a)


def angle_derivative_matrix(d):
    """Matrix D with (D c) the coefficients of d/da X(cos a, sin a)."""
    D = np.zeros((d + 1, d + 1))
    for j in range(d + 1):
        if j + 1 <= d:
            D[j + 1, j] -= d - j
        if j - 1 >= 0:
            D[j - 1, j] += j
    return D


def circle_monomials(d, angles):
    a = np.asarray(angles, dtype=float)
    c, s = np.cos(a), np.sin(a)
    j = np.arange(d + 1)
    return c[:, None] ** (d - j) * s[:, None] ** j


def circle_eval(coeffs, angles, order=0):
    """Values and angle-derivatives of the form rows on the circle.

    Returns an array (order + 1, len(angles), rows).  Going once around the
    circle (angle + pi) multiplies every value by (-1)^d.
    """
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=float))
    d = coeffs.shape[1] - 1
    D = angle_derivative_matrix(d)
    mono = circle_monomials(d, angles)
    out = []
    c = coeffs.T
    for _ in range(order + 1):
        out.append(mono @ c)
        c = D @ c
    return np.array(out)


def chart_eval(coeffs, t, order=0):
    """Values X(1, t) and t-derivatives; t = inf gives the point (0, 1)."""
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=float))
    if np.isinf(t):
        rev = coeffs[:, ::-1]
        return np.array([P.polyval(0.0, P.polyder(rev, k, axis=1).T) if k else rev[:, 0]
                         for k in range(order + 1)])
    return np.array([P.polyval(t, P.polyder(coeffs, k, axis=1).T) if k
                     else P.polyval(t, coeffs.T) for k in range(order + 1)])


def param_to_angle(t):
    return np.pi / 2 if np.isinf(t) else float(np.arctan(t))


def angle_to_param(a):
    a = (a + np.pi / 2) % np.pi - np.pi / 2
    if abs(a + np.pi / 2) < 1e-15:
        return np.inf
    return float(np.tan(a))


# ---------------------------------------------------------------------------
# curve containers


def _check_rows(coeffs, nrows, name):
    c = np.array(coeffs, dtype=float)
    if c.ndim != 2 or c.shape[0] != nrows or c.shape[1] < 2:
        raise DegenerateCurve(f"{name} needs {nrows} coefficient rows of equal length >= 2")
    if not np.all(np.isfinite(c)):
        raise DegenerateCurve("coefficients must be finite")
    return c


def _base_points(c, cfg):
    """Common zeros of all rows (a common factor of the forms)."""
    rng = np.random.default_rng(12345)
    w = rng.standard_normal(c.shape[0])
    comb_row = w @ c
    norm = np.linalg.norm(c)
    if np.linalg.norm(comb_row) <= cfg.root_tol * norm:
        w = rng.standard_normal(c.shape[0])
        comb_row = w @ c
    bad = []
    for t, _ in form_roots(comb_row, cfg):
        # evaluate on the unit circle of (s, t) to keep scales comparable
        if np.isinf(abs(t)):
            s_, t_ = 0.0, 1.0
        else:
            r = np.sqrt(1 + abs(t) ** 2)
            s_, t_ = 1 / r, t / r
        d = c.shape[1] - 1
        j = np.arange(d + 1)
        val = c @ (s_ ** (d - j) * t_ ** j)
        if np.linalg.norm(val) <= 1e-9 * norm:
            bad.append(t)
    return bad


class _RationalCurve:
    nrows = 0

    def _setup(self, coeffs, cfg):
        c = _check_rows(coeffs, self.nrows, type(self).__name__)
        if np.linalg.norm(c) == 0:
            raise DegenerateCurve("all coefficients vanish")
        bp = _base_points(c, cfg)
        if bp:
            raise DegenerateCurve(f"rows share a common factor (base point at t={bp[0]})")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        return self.coeffs.shape[1] - 1

    def point(self, t):
        """Unit representative of X(t) (t may be inf)."""
        x = chart_eval(self.coeffs, t)[0]
        n = np.linalg.norm(x)
        if n == 0:
            raise DegenerateCurve(f"curve undefined at t={t}")
        return x / n

    def __eq__(self, other):
        return (type(self) is type(other) and self.coeffs.shape == other.coeffs.shape
                and np.array_equal(self.coeffs, other.coeffs)
                and getattr(self, "orientation", 1) == getattr(other, "orientation", 1))

    def __hash__(self):
        return hash((type(self).__name__, self.coeffs.tobytes()))


@dataclass(frozen=True, eq=False)
class ParamSpaceCurve(_RationalCurve):
    """Parametrized real rational curve in RP^3.

    ``orientation = -1`` traverses the parameter circle backwards.  The image
    must span RP^3 when d >= 3, and the rows may not share a factor.
    """

    coeffs: np.ndarray
    orientation: int = 1
    label: str = ""

    nrows = 4

    def __post_init__(self):
        if self.orientation not in (1, -1):
            raise DegenerateCurve("orientation must be +1 or -1")
        self._setup(self.coeffs, DEFAULT_CONFIG)
        if self.degree >= 3:
            sv = np.linalg.svd(self.coeffs, compute_uv=False)
            if sv[-1] <= 1e-10 * sv[0]:
                raise DegenerateCurve("curve lies in a plane (coefficient rows are dependent)")

    def reversed(self):
        return ParamSpaceCurve(self.coeffs, -self.orientation, self.label)

    def mirrored(self):
        """Image under the reflection x3 -> -x3."""
        c = self.coeffs.copy()
        c[3] = -c[3]
        return ParamSpaceCurve(c, self.orientation, self.label)

    def flipped_parameter(self):
        """Same oriented curve written in the parameter -t."""
        sign = (-1.0) ** np.arange(self.degree + 1)
        return ParamSpaceCurve(self.coeffs * sign, -self.orientation, self.label)

    def transformed(self, A):
        """Image under a projective transformation x -> A x."""
        return ParamSpaceCurve(np.asarray(A, dtype=float) @ self.coeffs, self.orientation, self.label)


@dataclass(frozen=True, eq=False)
class ParamPlaneCurve(_RationalCurve):
    """Parametrized real rational curve in RP^2, not contained in a line."""

    coeffs: np.ndarray
    label: str = ""

    nrows = 3

    def __post_init__(self):
        self._setup(self.coeffs, DEFAULT_CONFIG)
        sv = np.linalg.svd(self.coeffs, compute_uv=False)
        if sv[-1] <= 1e-12 * sv[0]:
            raise DegenerateCurve("plane curve is contained in a line")


# ---------------------------------------------------------------------------
# pointwise geometry


def _speed_profile(coeffs, angles, order):
    """Unit representative and the Gram-Schmidt components of its derivatives."""
    vals = circle_eval(coeffs, angles, order)
    x = vals[0]
    nx = np.linalg.norm(x, axis=1)
    basis = [x / nx[:, None]]
    comps = []
    for k in range(1, order + 1):
        v = vals[k] / nx[:, None]
        for b in basis:
            v = v - np.sum(v * b, axis=1)[:, None] * b
        n = np.linalg.norm(v, axis=1)
        comps.append(n)
        basis.append(v / np.where(n > 0, n, 1.0)[:, None])
    return comps


def _common_real_zeros(minors, coeffs, order, cfg, rel):
    """Real parameters where the Gram-Schmidt component of order `order` dies."""
    rng = np.random.default_rng(777)
    keys = sorted(minors)
    combo = sum(rng.standard_normal() * minors[k] for k in keys)
    if np.linalg.norm(combo) <= cfg.root_tol * max(np.linalg.norm(minors[k]) for k in keys):
        return None
    grid = np.linspace(0, np.pi, 97)[:-1]
    ref = np.median(_speed_profile(coeffs, grid, order)[order - 1])
    hits = []
    try:
        roots = form_real_roots(combo, cfg)
    except NoConvergence:
        roots = []
    for t, _ in roots:
        a = param_to_angle(t)
        comp = _speed_profile(coeffs, [a], order)[order - 1][0]
        if comp <= rel * ref:
            hits.append(t)
    return hits


def stationary_points(curve, cfg=None):
    """Real parameters where X and X' are dependent (cusps)."""
    cfg = cfg or DEFAULT_CONFIG
    hits = _common_real_zeros(wronskian_minors(curve.coeffs, 2), curve.coeffs, 1, cfg, cfg.geom_tol)
    if hits is None:
        return [np.nan]
    return hits


def inflection_points(curve, cfg=None):
    """Real parameters where X, X', X'' are dependent (vanishing curvature)."""
    cfg = cfg or DEFAULT_CONFIG
    if curve.degree < 2:
        return [np.nan]
    hits = _common_real_zeros(wronskian_minors(curve.coeffs, 3), curve.coeffs, 2, cfg, cfg.geom_tol)
    if hits is None:
        return [np.nan]
    return hits


def torsion_polynomial(curve):
    """det[X, X', X'', X'''] as a form of degree 4(d-3)."""
    return wronskian(curve.coeffs)


@dataclass(frozen=True)
class TorsionPiece:
    start: float
    end: float
    sign: int


def torsion_sign_profile(curve, cfg=None):
    """Sign of the torsion around the parameter circle.

    Returns pieces in increasing-t order (wrapping through t = inf).  Open
    arcs carry sign +1 or -1; zeros appear as pieces with start == end and
    sign 0.  A curve with no torsion zero yields one piece (-inf, inf).
    """
    cfg = cfg or DEFAULT_CONFIG
    if curve.degree < 3:
        raise CurvatureVanishes("curves of degree < 3 have no torsion", [])
    infl = inflection_points(curve, cfg)
    if infl:
        raise CurvatureVanishes(f"curvature vanishes at t={infl}", infl)
    T = torsion_polynomial(curve)
    n = len(T) - 1
    if n == 0:
        return [TorsionPiece(-np.inf, np.inf, int(np.sign(T[0])))]
    zeros = form_real_roots(T, cfg)
    def sign_at(a):
        return int(np.sign(circle_monomials(n, [a])[0] @ T))
    if not zeros:
        return [TorsionPiece(-np.inf, np.inf, sign_at(0.3))]
    ang = sorted((param_to_angle(t), t) for t, _ in zeros)
    pieces = []
    for k, (a, t) in enumerate(ang):
        pieces.append(TorsionPiece(t, t, 0))
        a2, t2 = ang[(k + 1) % len(ang)]
        if k + 1 == len(ang):
            a2 += np.pi
        pieces.append(TorsionPiece(t, t2, sign_at(0.5 * (a + a2))))
    return pieces


def torsion_sign(curve, cfg=None):
    """+1 or -1 when the torsion never changes sign, else 0."""
    signs = {p.sign for p in torsion_sign_profile(curve, cfg) if p.sign}
    return signs.pop() if len(signs) == 1 else 0


# ---------------------------------------------------------------------------
# smoothness


@dataclass
class SmoothnessReport:
    ok: bool
    reasons: list = field(default_factory=list)
    node_pairs: list = field(default_factory=list)
    stationary: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def real_node_pairs(curve, cfg=None, attempts=4):
    """Real parameter pairs where the space curve meets itself."""
    cfg = cfg or DEFAULT_CONFIG
    rng = cfg.rng("validate")
    d = curve.degree
    if d < 3:
        return []
    last = None
    for _ in range(attempts):
        p = rng.standard_normal(4)
        p /= np.linalg.norm(p)
        M = np.linalg.svd(p[None, :])[2][1:]
        try:
            pairs = secant_pairs(M @ curve.coeffs, cfg, rng=rng)
        except NoConvergence as exc:
            last = exc
            continue
        out = []
        for a, b in pairs:
            if abs(a.imag) > cfg.cluster_tol * (1 + abs(a)) or abs(b.imag) > cfg.cluster_tol * (1 + abs(b)):
                continue
            ta = np.inf if np.isinf(abs(a)) else a.real
            tb = np.inf if np.isinf(abs(b)) else b.real
            if abs(np.sin(param_to_angle(ta) - param_to_angle(tb))) <= 1e-6:
                continue  # diagonal: a stationary point, reported separately
            xa, xb = curve.point(ta), curve.point(tb)
            if min(np.linalg.norm(xa - xb), np.linalg.norm(xa + xb)) <= cfg.geom_tol:
                out.append((ta, tb))
        return out
    raise NoConvergence(f"could not find a generic auxiliary projection: {last}")


def validate_smooth_link(curve, cfg=None):
    """Check that the real locus is an embedded circle."""
    cfg = cfg or DEFAULT_CONFIG
    reasons = []
    stat = stationary_points(curve, cfg)
    if stat:
        reasons.append(f"not immersed at t={stat}")
    nodes = real_node_pairs(curve, cfg)
    if nodes:
        reasons.append(f"real self-intersection at t={nodes}")
    return SmoothnessReport(not reasons, reasons, nodes, stat)


# ---------------------------------------------------------------------------
# plane sections


def plane_section_count(curve, plane, cfg=None, multiplicity=False):
    """Number of real intersection points of the curve with a plane."""
    cfg = cfg or DEFAULT_CONFIG
    w = np.asarray(plane, dtype=float)
    form = w @ curve.coeffs
    if np.linalg.norm(form) <= cfg.root_tol * np.linalg.norm(w) * np.linalg.norm(curve.coeffs):
        raise PlaneContainsCurve("plane contains the curve")
    roots = form_real_roots(form, cfg)
    return sum(m for _, m in roots) if multiplicity else len(roots)


def _tangent_planes(curve, angles, pencil=6):
    vals = circle_eval(curve.coeffs, angles, 2)
    out = []
    for k in range(len(angles)):
        x, v, acc = vals[0][k], vals[1][k], vals[2][k]
        q = np.linalg.svd(np.vstack([x, v]))[2][2:]
        for a in np.linspace(0, np.pi, pencil, endpoint=False) + 0.1:
            w = np.cos(a) * q[0] + np.sin(a) * q[1]
            out.append((w, x / np.linalg.norm(x), abs(w @ acc) / (np.linalg.norm(acc) + 1e-300)))
    return out


def min_plane_section_upper_bound(curve, cfg=None, n_random=200, n_points=24):
    """Smallest real section count seen over random and near-tangent planes.

    Planes through a tangent line, nudged off the tangent point, cut the curve
    in at most d - 2 real points; so for d >= 3 the result is <= d - 2.
    """
    cfg = cfg or DEFAULT_CONFIG
    rng = cfg.rng("sections")
    best = curve.degree
    for _ in range(n_random):
        try:
            best = min(best, plane_section_count(curve, rng.standard_normal(4), cfg))
        except PlaneContainsCurve:
            continue
    angles = (np.arange(n_points) + 0.37) * np.pi / n_points
    for w, x, osc in _tangent_planes(curve, angles):
        if osc < 1e-3:
            continue
        for sgn in (1.0, -1.0):
            try:
                best = min(best, plane_section_count(curve, w + sgn * cfg.geom_tol * x, cfg))
            except PlaneContainsCurve:
                continue
    return best


# ---------------------------------------------------------------------------
# sampled links


def _continue_signs(Z):
    Z = np.array(Z, dtype=float)
    Z /= np.linalg.norm(Z, axis=1)[:, None]
    flips = np.sum(Z[1:] * Z[:-1], axis=1) < 0
    sign = np.concatenate([[1.0], np.where(np.cumsum(flips) % 2, -1.0, 1.0)])
    return Z * sign[:, None]


@dataclass(frozen=True, eq=False)
class SampledLink:
    """Polygonal link in RP^3 given by unit 4-vectors.

    Each component is an (n, 4) array of consecutive samples; the closing
    segment from the last sample back to the first is implicit.  Signs are
    continued along each component, and ``closures`` records whether the
    lift returns to the first sample ("loop") or to its antipode
    ("antipodal_arc").
    """

    components: tuple
    orientations: tuple = ()
    closures: tuple = ()
    max_step: float = 0.1

    def __post_init__(self):
        comps, closes = [], []
        for Z in self.components:
            Z = np.asarray(Z, dtype=float)
            if Z.ndim != 2 or Z.shape[1] != 4 or len(Z) < 4:
                raise SamplingTooCoarse("components need at least 4 samples in R^4")
            Z = _continue_signs(Z)
            steps = np.linalg.norm(np.diff(Z, axis=0), axis=1)
            close_plus = np.linalg.norm(Z[-1] - Z[0])
            close_minus = np.linalg.norm(Z[-1] + Z[0])
            kind = "loop" if close_plus <= close_minus else "antipodal_arc"
            if max(steps.max(), min(close_plus, close_minus)) > self.max_step:
                raise SamplingTooCoarse(
                    f"consecutive samples {max(steps.max(), min(close_plus, close_minus)):.3g} apart")
            Z.flags.writeable = False
            comps.append(Z)
            closes.append(kind)
        orient = tuple(self.orientations) or (1,) * len(comps)
        if len(orient) != len(comps) or any(o not in (1, -1) for o in orient):
            raise ValueError("one orientation (+1/-1) per component")
        if self.closures and tuple(self.closures) != tuple(closes):
            raise SamplingTooCoarse("declared closure types disagree with the samples")
        object.__setattr__(self, "components", tuple(comps))
        object.__setattr__(self, "orientations", orient)
        object.__setattr__(self, "closures", tuple(closes))
