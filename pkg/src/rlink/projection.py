"""Central projection RP^3 --> RP^2 and the resulting nodal diagrams.

A diagram records every node of the projected curve: real crossings with an
over/under decision and a sign, solitary real points (images of a pair of
conjugate parameters) with a sign, and pairs of non-real, non-conjugate
parameters.  It also records the real flexes and the solitary bitangents of
the plane curve.
"""

from dataclasses import dataclass, field

import numpy as np

from .algebra import (DEFAULT_CONFIG, cross_rows, form_real_roots, form_roots, secant_pairs,
                      wronskian)
from .curves import (ParamPlaneCurve, chart_eval, circle_eval,
                     param_to_angle)
from .errors import (CenterOnCurve, DegenerateCurve, DegenerateGaussMap, DegreeDrop,
                     NoConvergence, NonGenericCenter, ZeroPolynomial)


def _sign_normalize(v, tol=1e-12):
    v = np.asarray(v, dtype=float)
    for x in v:
        if abs(x) > tol:
            return v if x > 0 else -v
    return v


@dataclass(frozen=True, eq=False)
class ProjectionCenter:
    """A point of RP^3 stored as a unit vector whose first nonzero entry is positive."""

    point: np.ndarray
    genericity: dict = field(default_factory=dict)

    def __post_init__(self):
        p = np.array(self.point, dtype=float).ravel()
        if p.shape != (4,) or not np.all(np.isfinite(p)) or np.linalg.norm(p) == 0:
            raise ValueError("a projection center is a nonzero vector in R^4")
        p = _sign_normalize(p / np.linalg.norm(p))
        p.flags.writeable = False
        object.__setattr__(self, "point", p)

    def __eq__(self, other):
        return isinstance(other, ProjectionCenter) and np.array_equal(self.point, other.point)

    def __hash__(self):
        return hash(self.point.tobytes())


def as_center(p):
    return p if isinstance(p, ProjectionCenter) else ProjectionCenter(p)


def projection_basis(p):
    """Orthonormal rows spanning p-perp, oriented so det[M; p] = +1."""
    p = as_center(p).point
    v = p.copy()
    v[3] += 1.0 if p[3] >= 0 else -1.0
    H = np.eye(4) - 2.0 * np.outer(v, v) / (v @ v)
    M = H[:3].copy()
    if np.linalg.det(np.vstack([M, p])) < 0:
        M[0] = -M[0]
    return M


def project(curve, center, cfg=None):
    """Plane curve obtained by projecting from ``center``."""
    cfg = cfg or DEFAULT_CONFIG
    center = as_center(center)
    M = projection_basis(center)
    rows = M @ curve.coeffs
    # a common zero of the projected rows is a parameter with X(t) ~ p
    w = np.array([0.5743, -0.8061, 0.1437])
    try:
        roots = form_roots(w @ rows, cfg)
    except ZeroPolynomial:
        roots = form_roots(rows[0] if np.any(rows[0]) else rows[1], cfg)
    d = curve.degree
    j = np.arange(d + 1)
    for t, _ in roots:
        if np.isinf(abs(t)):
            st = (0.0, 1.0)
        else:
            r = np.sqrt(1 + abs(t) ** 2)
            st = (1 / r, t / r)
        mono = st[0] ** (d - j) * st[1] ** j
        x = curve.coeffs @ mono
        if np.linalg.norm(M @ x) <= cfg.geom_tol * np.linalg.norm(x):
            if t.imag == 0:
                raise CenterOnCurve(f"center lies on the curve at t={t.real}")
            raise DegreeDrop(f"center lies on the secant of conjugate points t={t}")
    try:
        return ParamPlaneCurve(rows, label=getattr(curve, "label", ""))
    except DegenerateCurve as exc:
        raise DegreeDrop(str(exc)) from exc


# ---------------------------------------------------------------------------
# diagram records


@dataclass(frozen=True)
class Crossing:
    over: float
    under: float
    sign: int
    image: tuple


@dataclass(frozen=True)
class SolitaryPoint:
    tau: complex
    sign: int
    image: tuple


@dataclass(frozen=True)
class FlexPoint:
    t: float
    multiplicity: int = 1


@dataclass(frozen=True)
class Census:
    h: int
    e: int
    i: int

    @property
    def total(self):
        return self.h + self.e + self.i


@dataclass(frozen=True, eq=False)
class PlaneDiagram:
    """Node census, real flexes and solitary bitangents of a plane curve."""

    plane_curve: ParamPlaneCurve
    real_pairs: tuple
    solitary_taus: tuple
    imaginary_pairs: tuple
    flexes: tuple
    bitangents: tuple = None

    @property
    def degree(self):
        return self.plane_curve.degree

    @property
    def census(self):
        return Census(len(self.real_pairs), len(self.solitary_taus), len(self.imaginary_pairs))

    @property
    def F(self):
        return sum(f.multiplicity for f in self.flexes)

    @property
    def B(self):
        if self.bitangents is None:
            raise ValueError("diagram was built without bitangents")
        return sum(m for _, m in self.bitangents)


@dataclass(frozen=True, eq=False)
class Diagram(PlaneDiagram):
    """Plane diagram of a space curve, with crossing and solitary signs."""

    center: ProjectionCenter = None
    crossings: tuple = ()
    solitary: tuple = ()

    @property
    def real_writhe(self):
        return sum(c.sign for c in self.crossings)

    @property
    def solitary_writhe(self):
        return sum(s.sign for s in self.solitary)

    @property
    def writhe(self):
        return self.real_writhe + self.solitary_writhe

    @property
    def blackboard_twice(self):
        """Twice the blackboard self-linking number (sum of crossing signs)."""
        return 2 * self.real_writhe


# ---------------------------------------------------------------------------
# node classification


def _is_real(z, cfg):
    return np.isinf(abs(z)) or abs(z.imag) <= cfg.cluster_tol * (1 + abs(z))


def _real(z):
    return np.inf if np.isinf(abs(z)) else float(z.real)


def _classify(pairs, cfg):
    real, sol, imag = [], [], []
    for a, b in pairs:
        if _is_real(a, cfg) and _is_real(b, cfg):
            real.append((_real(a), _real(b)))
        elif not _is_real(a, cfg) and abs(a - np.conj(b)) <= 1e-6 * (1 + abs(a)):
            tau = a if a.imag > 0 else b
            sol.append(complex(0.5 * (tau + np.conj(a if tau is b else b))))
        else:
            imag.append((a, b))
    return real, sol, imag


def _param_gap(a, b):
    """Distance on the complexified parameter circle, robust at infinity."""
    if np.isinf(abs(a)) and np.isinf(abs(b)):
        return 0.0
    if np.isinf(abs(a)) or np.isinf(abs(b)):
        z = b if np.isinf(abs(a)) else a
        return 1.0 / np.sqrt(1 + abs(z) ** 2)
    return abs(a - b) / np.sqrt((1 + abs(a) ** 2) * (1 + abs(b) ** 2))


def _check_distinct(params, what, tol=1e-7):
    for i in range(len(params)):
        for j in range(i + 1, len(params)):
            if _param_gap(params[i], params[j]) <= tol:
                raise NonGenericCenter(f"{what}: parameters {params[i]} and {params[j]} coincide")


def plane_flexes(plane_curve, cfg=None):
    """Real flexes as FlexPoint records (parameter and order of contact - 2)."""
    cfg = cfg or DEFAULT_CONFIG
    W = wronskian(plane_curve.coeffs)
    if np.linalg.norm(W) == 0:
        raise DegenerateGaussMap("Wronskian vanishes identically")
    if len(W) == 1:
        return ()
    return tuple(FlexPoint(t, m) for t, m in form_real_roots(W, cfg))


def solitary_bitangents(plane_curve, cfg=None):
    """Solitary bitangents: real lines tangent at two conjugate points.

    Returns (tau, multiplicity) with Im tau > 0; the multiplicity is 2 at
    ordinary tangency points, more when tau is also a flex.
    """
    cfg = cfg or DEFAULT_CONFIG
    C = plane_curve.coeffs
    d = plane_curve.degree
    W = wronskian(C)
    if np.linalg.norm(W) == 0:
        raise DegenerateGaussMap("Wronskian vanishes identically")
    if d < 4:
        return ()
    G = cross_rows(C)
    if np.linalg.norm(G) == 0:
        raise DegenerateGaussMap("dual curve is degenerate")
    flex_params = []
    for t, m in form_roots(W, cfg):
        if m > 1:
            raise NonGenericCenter(f"flex of higher order at t={t}")
        flex_params.append(t)
    try:
        pairs = secant_pairs(G, cfg, cusps=flex_params, rng=cfg.rng("dual"))
    except NoConvergence as exc:
        raise NonGenericCenter(f"bitangent elimination failed: {exc}") from exc
    _, sol, _ = _classify(pairs, cfg)
    return tuple((tau, 2) for tau in sorted(sol, key=lambda z: (z.real, z.imag)))


def _nodes(plane_curve, cfg):
    d = plane_curve.degree
    try:
        pairs = secant_pairs(plane_curve.coeffs, cfg, rng=cfg.rng("diagram"))
    except NoConvergence as exc:
        raise NonGenericCenter(f"node elimination failed: {exc}") from exc
    if len(pairs) != (d - 1) * (d - 2) // 2:
        raise NonGenericCenter("node count does not close")
    flat = [z for pr in pairs for z in pr]
    _check_distinct(flat, "nodes")
    return _classify(pairs, cfg)


def plane_diagram(plane_curve, cfg=None, with_bitangents=True):
    cfg = cfg or DEFAULT_CONFIG
    real, sol, imag = _nodes(plane_curve, cfg)
    flexes = plane_flexes(plane_curve, cfg)
    _check_distinct([f.t for f in flexes] + [z for pr in real for z in pr], "flex and crossing")
    bit = solitary_bitangents(plane_curve, cfg) if with_bitangents else None
    return PlaneDiagram(plane_curve, tuple(real), tuple(sol), tuple(imag), flexes, bit)


def _real_direction(v):
    """Real unit vector spanning the complex line of a real point."""
    k = int(np.argmax(np.abs(v)))
    w = (v * np.conj(v[k])).real
    return tuple(_sign_normalize(w / np.linalg.norm(w)))


def crossing_sign(curve, center, t1, t2):
    """Sign and over-strand of the crossing of parameters t1, t2.

    Derivatives are taken along increasing t.  Strand 1 is over when the
    affine chart vanishing at p puts X(t1) on the +p side of X(t2).
    """
    p = as_center(center).point
    a1, a2 = param_to_angle(t1), param_to_angle(t2)
    v1 = circle_eval(curve.coeffs, [a1], 1)[:, 0]
    v2 = circle_eval(curve.coeffs, [a2], 1)[:, 0]
    x1, d1 = v1
    x2, d2 = v2
    n1, n2 = np.linalg.norm(x1), np.linalg.norm(x2)
    coef, *_ = np.linalg.lstsq(np.column_stack([x1, p]), x2, rcond=None)
    alpha, beta = coef
    if np.linalg.norm(alpha * x1 + beta * p - x2) > 1e-6 * n2:
        raise NonGenericCenter("crossing strands are not collinear with the center")
    D = np.linalg.det(np.column_stack([x1, d1, d2, p]))
    scale = n1 * np.linalg.norm(d1) * np.linalg.norm(d2)
    if abs(D) <= 1e-10 * scale or abs(beta) <= 1e-12 * n2:
        raise NonGenericCenter("tangential crossing")
    sign = int(np.sign(-beta * D)) * curve.orientation ** 2
    first_over = -beta * np.sign(alpha) > 0
    return sign, first_over


def solitary_sign(curve, tau):
    """Sign at a solitary real point, from the conjugate pair of parameters.

    sgn det[Re X, Im X, Re X', Im X'] at tau: unchanged by tau -> conj(tau),
    by complex rescaling, and by the choice of projection center.
    """
    x, dx = chart_eval(curve.coeffs, complex(tau), 1)
    D = np.linalg.det(np.column_stack([x.real, x.imag, dx.real, dx.imag]))
    scale = np.linalg.norm(x) ** 2 * np.linalg.norm(dx) ** 2
    if abs(D) <= 1e-13 * scale:
        raise NonGenericCenter(f"solitary point at tau={tau} has no definite sign")
    return int(np.sign(D))


def build_diagram(curve, center, cfg=None, with_bitangents=True):
    """Project from ``center`` and classify the nodes with their signs.

    Raises NonGenericCenter when the projection is not nodal, has a triple
    point, a tacnode, or a flex at a crossing; DegreeDrop when the center
    lies on the (complexified) curve.
    """
    cfg = cfg or DEFAULT_CONFIG
    center = as_center(center)
    plane = project(curve, center, cfg)
    base = plane_diagram(plane, cfg, with_bitangents)
    M = projection_basis(center)
    crossings = []
    for t1, t2 in base.real_pairs:
        sign, first_over = crossing_sign(curve, center, t1, t2)
        over, under = (t1, t2) if first_over else (t2, t1)
        img = _sign_normalize(M @ curve.point(t1))
        crossings.append(Crossing(over, under, sign, tuple(img)))
    solitary = []
    for tau in base.solitary_taus:
        x = chart_eval(curve.coeffs, tau)[0]
        solitary.append(SolitaryPoint(tau, solitary_sign(curve, tau), _real_direction(M @ x)))
    crossings.sort(key=lambda c: (min(param_to_angle(c.over), param_to_angle(c.under))))
    solitary.sort(key=lambda s: (s.tau.real, s.tau.imag))
    return Diagram(plane, base.real_pairs, base.solitary_taus, base.imaginary_pairs, base.flexes,
                   base.bitangents, center, tuple(crossings), tuple(solitary))


# ---------------------------------------------------------------------------
# Klein's formula


@dataclass(frozen=True)
class KleinReport:
    degree: int
    F: int
    B: int
    h: int
    e: int
    i: int

    @property
    def lhs(self):
        return self.F + self.B

    @property
    def rhs(self):
        return self.degree * (self.degree - 2) - 2 * self.h - 2 * self.i

    @property
    def census_closes(self):
        d = self.degree
        return self.h + self.e + self.i == (d - 1) * (d - 2) // 2

    @property
    def passed(self):
        return self.lhs == self.rhs and self.census_closes

    def line(self):
        verdict = "PASS" if self.passed else "FAIL"
        return (f"F={self.F} B={self.B} h={self.h} i={self.i} : "
                f"{self.lhs} = {self.rhs} {verdict}")


def klein_check(diagram):
    """Real flexes + solitary bitangents against d(d-2) - 2h - 2i."""
    c = diagram.census
    return KleinReport(diagram.degree, diagram.F, diagram.B, c.h, c.e, c.i)


def random_center(cfg=None, rng=None):
    cfg = cfg or DEFAULT_CONFIG
    rng = rng if rng is not None else cfg.rng("center")
    return ProjectionCenter(rng.standard_normal(4))


def generic_diagrams(curve, n, cfg=None, rng=None, with_bitangents=False, max_tries=None):
    """n diagrams from seeded random centers, skipping non-generic ones."""
    cfg = cfg or DEFAULT_CONFIG
    rng = rng if rng is not None else cfg.rng("centers")
    out = []
    tries = 0
    limit = max_tries or 20 * n + 20
    while len(out) < n:
        tries += 1
        if tries > limit:
            raise NonGenericCenter(f"only {len(out)} generic centers in {limit} tries")
        c = random_center(cfg, rng)
        try:
            out.append(build_diagram(curve, c, cfg, with_bitangents))
        except (NonGenericCenter, DegreeDrop):
            continue
    return out
