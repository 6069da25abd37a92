"""Invariants of real rational links assembled from diagrams and framings.

* encomplexed writhe w: crossing signs plus solitary-point signs, checked for
  independence of the projection center;
* tightness of osc against d(d-2)/2 and the inequalities that bound it
  through any diagram;
* scans of one-parameter families for walls where w or osc jump.
"""

import enum
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .algebra import DEFAULT_CONFIG
from .curves import ParamSpaceCurve, chart_eval, torsion_sign, validate_smooth_link
from .errors import (BoundViolated, CurvatureVanishes, DegenerateCurve, DegreeDrop,
                     InconsistentTightness, NoValidSamples, NonGenericCenter, RlinkError,
                     SignRuleUnverified)
from .linking import OSCULATING, HalfInt, blackboard_from_diagram, self_linking
from .projection import (ProjectionCenter, build_diagram, generic_diagrams)


def worker_count():
    try:
        return max(1, int(os.environ.get("RLINK_THREADS", "1")))
    except ValueError:
        return 1


def pmap(fn, items):
    """Order-preserving map; threads are used when RLINK_THREADS > 1."""
    items = list(items)
    n = worker_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# encomplexed writhe


@dataclass(frozen=True)
class WritheResult:
    value: int
    per_center: tuple
    independent: bool

    @property
    def totals(self):
        return [r + s for _, r, s in self.per_center]


def writhe_from_diagrams(diagrams):
    per = tuple((D.center, D.real_writhe, D.solitary_writhe) for D in diagrams)
    totals = {r + s for _, r, s in per}
    independent = len(totals) == 1
    value = totals.pop() if independent else None
    res = WritheResult(value, per, independent)
    if not independent:
        raise SignRuleUnverified(f"writhe depends on the center: {sorted(r + s for _, r, s in per)}",
                                 result=res)
    return res


def encomplexed_writhe(curve, centers=None, cfg=None, n_centers=10):
    """w of the real link: sum of crossing and solitary-point signs.

    With ``centers=None`` the centers are drawn from the seeded generator,
    rejecting non-generic ones.  Disagreement between centers raises
    SignRuleUnverified with the per-center data attached.
    """
    cfg = cfg or DEFAULT_CONFIG
    if centers is None:
        diagrams = generic_diagrams(curve, n_centers, cfg)
    else:
        diagrams = pmap(lambda c: build_diagram(curve, c, cfg, with_bitangents=False), centers)
    return writhe_from_diagrams(diagrams)


def writhe_bound(curve):
    d = curve.degree
    return (d - 1) * (d - 2) // 2


# ---------------------------------------------------------------------------
# osc and tightness


@dataclass(frozen=True)
class ChainCheck:
    """The inequalities |osc| <= |osc - b| + |b| <= F/2 + h <= d(d-2)/2 at one center."""

    b: HalfInt
    osc_minus_b: HalfInt
    half_f_plus_h: HalfInt
    bound: HalfInt
    framing_step: bool   # |osc - b| <= F/2
    crossing_step: bool  # |b| <= h
    top_step: bool       # F/2 + h <= d(d-2)/2

    @property
    def holds(self):
        return self.framing_step and self.crossing_step and self.top_step


def chain_check(osc, diagram):
    d = diagram.degree
    b = blackboard_from_diagram(diagram)
    h = diagram.census.h
    F = diagram.F
    bound = HalfInt(d * (d - 2))
    return ChainCheck(b, abs(osc - b), HalfInt(F + 2 * h), bound,
                      abs(osc - b) <= HalfInt(F), abs(b) <= h, HalfInt(F + 2 * h) <= bound)


@dataclass(frozen=True)
class TightnessReport:
    osc_value: HalfInt
    bound: HalfInt
    tight: bool
    mw_verdict: bool
    torsion_positive: bool
    sign_constancy: bool
    orientation_is_complex: bool
    flexes_simple: bool = True
    torsion_sign: int = 0
    chains: tuple = ()


def _crossing_signs(diagrams):
    return [c.sign for D in diagrams for c in D.crossings]


def tightness_check(curve, cfg=None, n_centers=10, diagrams=None, osc=None):
    """Compare osc with d(d-2)/2 and corroborate a tight verdict.

    The verdict is |osc| == d(d-2)/2.  For tight curves the crossing signs at
    every tested center, the torsion sign and the sign of osc must agree and
    every real flex must be simple; otherwise InconsistentTightness is raised.
    """
    cfg = cfg or DEFAULT_CONFIG
    d = curve.degree
    if d < 3:
        raise DegenerateCurve("tightness needs degree >= 3")
    rep = validate_smooth_link(curve, cfg)
    if not rep.ok:
        raise DegenerateCurve("; ".join(rep.reasons))
    osc = self_linking(curve, OSCULATING, cfg) if osc is None else osc
    bound = HalfInt(d * (d - 2))
    if abs(osc) > bound:
        raise BoundViolated(f"|osc| = {abs(osc)} exceeds {bound}")
    if diagrams is None:
        diagrams = generic_diagrams(curve, n_centers, cfg)
    chains = tuple(chain_check(osc, D) for D in diagrams)
    for ch in chains:
        if not ch.holds:
            raise BoundViolated(f"inequality chain fails: {ch}")
    tight = abs(osc) == bound
    osc_sign = int(np.sign(osc.twice_value))
    signs = set(_crossing_signs(diagrams))
    sign_constancy = len(signs) <= 1 and (not tight or signs <= {osc_sign})
    try:
        tsign = torsion_sign(curve, cfg)
    except CurvatureVanishes:
        tsign = 0
    torsion_positive = tsign != 0 and tsign == osc_sign
    flexes_simple = all(f.multiplicity == 1 for D in diagrams for f in D.flexes)
    report = TightnessReport(osc, bound, tight, tight, torsion_positive, sign_constancy, True,
                             flexes_simple, tsign, chains)
    if tight and not (torsion_positive and sign_constancy and flexes_simple):
        raise InconsistentTightness(f"|osc| is maximal but a necessary condition fails: {report}")
    return report


# ---------------------------------------------------------------------------
# crossing-number bounds


def elliptic_forcing_diagram(curve, cfg=None, tries=40):
    """Diagram from a center on the real line through a conjugate pair X(tau), X(conj tau).

    Such a projection has a solitary point, so it has at least one elliptic node.
    """
    cfg = cfg or DEFAULT_CONFIG
    rng = cfg.rng("elliptic")
    for _ in range(tries):
        tau = complex(rng.normal(), abs(rng.normal()) + 0.2)
        x = chart_eval(curve.coeffs, tau)[0]
        phi = rng.uniform(0, np.pi)
        p = np.cos(phi) * x.real + np.sin(phi) * x.imag
        try:
            D = build_diagram(curve, ProjectionCenter(p), cfg, with_bitangents=False)
        except (NonGenericCenter, DegreeDrop, ValueError):
            continue
        if D.census.e >= 1:
            return D
    raise NonGenericCenter("no generic center on a conjugate secant was found")


@dataclass(frozen=True)
class NodeBoundReport:
    a: int = None
    crossing_lower_bound: int = None
    crossing_bound_checkable: bool = False
    crossing_bound_ok: bool = None
    elliptic_upper_bound: int = None
    elliptic_h: int = None
    elliptic_bound_ok: bool = None
    per_diagram_h: tuple = ()


def murasugi_harnack_checks(curve, diagrams, cfg=None, tight=None, elliptic_diagram=None):
    """Lower bound on crossings for tight curves and upper bound at elliptic centers.

    For a tight rational curve a = d - 2, and every diagram must have
    2h >= (a + 2)(a - 1).  A diagram with a solitary point has
    h <= (d-1)(d-2)/2 - 1.  Report-only.
    """
    cfg = cfg or DEFAULT_CONFIG
    d = curve.degree
    hs = tuple(D.census.h for D in diagrams)
    a = lower = ok = None
    if tight:
        a = d - 2
        lower = (a + 2) * (a - 1)
        ok = all(2 * h >= lower for h in hs)
    if elliptic_diagram is None:
        try:
            elliptic_diagram = elliptic_forcing_diagram(curve, cfg)
        except NonGenericCenter:
            elliptic_diagram = None
    upper = (d - 1) * (d - 2) // 2 - 1
    eh = elliptic_diagram.census.h if elliptic_diagram is not None else None
    return NodeBoundReport(a, lower, bool(tight), ok, upper, eh,
                           None if eh is None else eh <= upper, hs)


# ---------------------------------------------------------------------------
# wall scans


class WallKind(enum.Enum):
    First = "First"
    Second = "Second"
    Third = "Third"
    Unknown = "Unknown"


@dataclass(frozen=True)
class WallEvent:
    lambda_lo: float
    lambda_hi: float
    d_wlambda: int
    d_osc: HalfInt
    kind: WallKind


@dataclass(frozen=True, eq=False)
class FamilySpec:
    """Curves X_lambda whose coefficients are polynomials in lambda.

    ``lambda_coeffs[k, j, m]`` multiplies lambda**m in coefficient c[k, j].
    """

    lambda_coeffs: np.ndarray
    lam_range: tuple
    orientation: int = 1
    label: str = ""

    def __post_init__(self):
        c = np.array(self.lambda_coeffs, dtype=float)
        if c.ndim == 2:
            c = c[:, :, None]
        if c.ndim != 3 or c.shape[0] != 4:
            raise ValueError("lambda_coeffs must have shape (4, d+1, k)")
        lo, hi = map(float, self.lam_range)
        if not lo < hi:
            raise ValueError("lam_range must be increasing")
        object.__setattr__(self, "lambda_coeffs", c)
        object.__setattr__(self, "lam_range", (lo, hi))

    def coeffs_at(self, lam):
        powers = lam ** np.arange(self.lambda_coeffs.shape[2])
        return self.lambda_coeffs @ powers

    def curve_at(self, lam):
        return ParamSpaceCurve(self.coeffs_at(lam), self.orientation, self.label)


def classify_wall(dw, dosc):
    if dw != 0 and dosc != 0:
        ok = abs(dw) == 2 and abs(dosc) == 2
        return WallKind.First if ok else WallKind.Unknown
    if dw != 0:
        return WallKind.Second if dw % 2 == 0 else WallKind.Unknown
    if dosc != 0:
        return WallKind.Third
    return WallKind.Unknown


def family_invariants(family, lam, cfg=None, n_centers=3):
    """(w, osc) at one parameter value, or None when the curve is not a smooth link."""
    cfg = cfg or DEFAULT_CONFIG
    try:
        curve = family.curve_at(lam)
        if not validate_smooth_link(curve, cfg).ok:
            return None
        w = encomplexed_writhe(curve, cfg=cfg, n_centers=n_centers).value
        osc = self_linking(curve, OSCULATING, cfg)
    except RlinkError:
        return None
    return (w, osc)


def family_scan(family, cfg=None, steps=40, lam_tol=1e-4, n_centers=3):
    """Walls crossed by the family, bracketed to width below ``lam_tol``."""
    cfg = cfg or DEFAULT_CONFIG
    lo, hi = family.lam_range
    grid = np.linspace(lo, hi, steps + 1)
    vals = pmap(lambda x: family_invariants(family, float(x), cfg, n_centers), grid)
    valid = [(float(x), v) for x, v in zip(grid, vals) if v is not None]
    if not valid:
        raise NoValidSamples("no parameter value gives a smooth link")
    cache = {}

    def value(x):
        if x not in cache:
            cache[x] = family_invariants(family, x, cfg, n_centers)
        return cache[x]

    def refine(a, va, b, vb):
        if va == vb:
            return []
        if b - a < lam_tol:
            return [(a, va, b, vb)]
        m = 0.5 * (a + b)
        vm = value(m)
        if vm is None:
            for frac in (0.3, 0.7, 0.4, 0.6):
                m = a + frac * (b - a)
                vm = value(m)
                if vm is not None:
                    break
        if vm is None:
            return [(a, va, b, vb)]
        return refine(a, va, m, vm) + refine(m, vm, b, vb)

    events = []
    for (a, va), (b, vb) in zip(valid, valid[1:]):
        for a2, va2, b2, vb2 in refine(a, va, b, vb):
            dw = vb2[0] - va2[0]
            dosc = vb2[1] - va2[1]
            events.append(WallEvent(a2, b2, int(dw), dosc, classify_wall(dw, dosc)))
    return events
