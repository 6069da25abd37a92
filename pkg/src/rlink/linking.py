"""Linking numbers in RP^3 via the double cover S^3 -> RP^3.

A closed curve in RP^3 lifts either to a single loop in S^3 (when its
representative returns to its own negative) or to a pair of antipodal
loops.  For cycles A, B in RP^3,

    lk(A, B) = 1/2 * lk_S3(full preimage of A, full preimage of B),

and the S^3 linking number is evaluated after stereographic projection to
R^3 with the exact solid-angle formula for pairs of straight segments.
"""

import functools
import math
from dataclasses import dataclass

import numba as nb
import numpy as np

from .algebra import DEFAULT_CONFIG
from .curves import (ParamSpaceCurve, SampledLink, circle_eval, inflection_points)
from .errors import (CurvesIntersect, FramingDegenerate, RoundingUnsafe, SamplingTooCoarse,
                     UnstableEps)


# ---------------------------------------------------------------------------
# half-integers


@functools.total_ordering
@dataclass(frozen=True)
class HalfInt:
    """An element of (1/2)Z stored as twice its value."""

    twice_value: int

    def __post_init__(self):
        object.__setattr__(self, "twice_value", int(self.twice_value))

    @classmethod
    def from_float(cls, x, slack=0.1):
        """Round x to the nearest half-integer; RoundingUnsafe if x is far from one."""
        t = round(2.0 * x)
        if not np.isfinite(x) or abs(x - t / 2.0) > slack:
            raise RoundingUnsafe(f"{x!r} is not within {slack} of a half-integer", raw=x)
        return cls(t)

    @property
    def value(self):
        return self.twice_value / 2.0

    @property
    def is_integer(self):
        return self.twice_value % 2 == 0

    def __float__(self):
        return self.value

    def _coerce(self, other):
        if isinstance(other, HalfInt):
            return other.twice_value
        if isinstance(other, (int, np.integer)):
            return 2 * int(other)
        if isinstance(other, (float, np.floating)) and float(2 * other).is_integer():
            return int(2 * other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else HalfInt(self.twice_value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else HalfInt(self.twice_value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else HalfInt(o - self.twice_value)

    def __neg__(self):
        return HalfInt(-self.twice_value)

    def __abs__(self):
        return HalfInt(abs(self.twice_value))

    def __eq__(self, other):
        o = self._coerce(other)
        return o is not None and o == self.twice_value

    def __lt__(self, other):
        if isinstance(other, HalfInt):
            return self.twice_value < other.twice_value
        return self.value < float(other)

    def __hash__(self):
        return hash(("HalfInt", self.twice_value))

    def __str__(self):
        if self.is_integer:
            return str(self.twice_value // 2)
        return f"{self.twice_value}/2"

    def __repr__(self):
        return f"HalfInt({self})"


# ---------------------------------------------------------------------------
# Gauss linking integral for closed polygons in R^3


@nb.njit(cache=True)
def _segment_rows(A, B):
    # Solid angle of each pair of segments (A[i], A[i+1]) x (B[j], B[j+1]);
    # row sums are returned so the final summation order is fixed.
    n = A.shape[0]
    m = B.shape[0]
    out = np.zeros(n)
    for i in range(n):
        i1 = (i + 1) % n
        ax, ay, az = A[i, 0], A[i, 1], A[i, 2]
        bx, by, bz = A[i1, 0], A[i1, 1], A[i1, 2]
        r12x, r12y, r12z = bx - ax, by - ay, bz - az
        acc = 0.0
        for j in range(m):
            j1 = (j + 1) % m
            cx, cy, cz = B[j, 0], B[j, 1], B[j, 2]
            dx, dy, dz = B[j1, 0], B[j1, 1], B[j1, 2]
            r13x, r13y, r13z = cx - ax, cy - ay, cz - az
            r14x, r14y, r14z = dx - ax, dy - ay, dz - az
            r23x, r23y, r23z = cx - bx, cy - by, cz - bz
            r24x, r24y, r24z = dx - bx, dy - by, dz - bz
            n1x = r13y * r14z - r13z * r14y
            n1y = r13z * r14x - r13x * r14z
            n1z = r13x * r14y - r13y * r14x
            n2x = r14y * r24z - r14z * r24y
            n2y = r14z * r24x - r14x * r24z
            n2z = r14x * r24y - r14y * r24x
            n3x = r24y * r23z - r24z * r23y
            n3y = r24z * r23x - r24x * r23z
            n3z = r24x * r23y - r24y * r23x
            n4x = r23y * r13z - r23z * r13y
            n4y = r23z * r13x - r23x * r13z
            n4z = r23x * r13y - r23y * r13x
            l1 = math.sqrt(n1x * n1x + n1y * n1y + n1z * n1z)
            l2 = math.sqrt(n2x * n2x + n2y * n2y + n2z * n2z)
            l3 = math.sqrt(n3x * n3x + n3y * n3y + n3z * n3z)
            l4 = math.sqrt(n4x * n4x + n4y * n4y + n4z * n4z)
            if l1 == 0.0 or l2 == 0.0 or l3 == 0.0 or l4 == 0.0:
                continue
            c12 = (n1x * n2x + n1y * n2y + n1z * n2z) / (l1 * l2)
            c23 = (n2x * n3x + n2y * n3y + n2z * n3z) / (l2 * l3)
            c34 = (n3x * n4x + n3y * n4y + n3z * n4z) / (l3 * l4)
            c41 = (n4x * n1x + n4y * n1y + n4z * n1z) / (l4 * l1)
            om = (math.asin(min(1.0, max(-1.0, c12))) + math.asin(min(1.0, max(-1.0, c23)))
                  + math.asin(min(1.0, max(-1.0, c34))) + math.asin(min(1.0, max(-1.0, c41))))
            r34x, r34y, r34z = dx - cx, dy - cy, dz - cz
            sx = r34y * r12z - r34z * r12y
            sy = r34z * r12x - r34x * r12z
            sz = r34x * r12y - r34y * r12x
            s = sx * r13x + sy * r13y + sz * r13z
            if s > 0:
                acc += om
            elif s < 0:
                acc -= om
        out[i] = acc
    return out


def gauss_linking_r3(A, B):
    """Linking number of two closed polygons in R^3 (vertices in order)."""
    A = np.ascontiguousarray(A, dtype=float)
    B = np.ascontiguousarray(B, dtype=float)
    return math.fsum(_segment_rows(A, B)) / (4.0 * math.pi)


@nb.njit(cache=True)
def _strand_gaps(Z, S, total):
    # For each sample, the smallest projective chord to a sample that is far
    # along the curve compared to its chord (i.e. on another strand).
    n = Z.shape[0]
    out = np.full(n, np.inf)
    for i in range(n):
        for j in range(i + 1, n):
            dp = 0.0
            dm = 0.0
            for k in range(4):
                a = Z[i, k] - Z[j, k]
                b = Z[i, k] + Z[j, k]
                dp += a * a
                dm += b * b
            ch = math.sqrt(min(dp, dm))
            ds = abs(S[i] - S[j])
            arc = min(ds, total - ds)
            if ch < 0.5 * arc:
                if ch < out[i]:
                    out[i] = ch
                if ch < out[j]:
                    out[j] = ch
    return out


@nb.njit(cache=True)
def _cross_gaps(Z, W):
    n = Z.shape[0]
    out = np.full(n, np.inf)
    for i in range(n):
        best = np.inf
        for j in range(W.shape[0]):
            dp = 0.0
            dm = 0.0
            for k in range(4):
                a = Z[i, k] - W[j, k]
                b = Z[i, k] + W[j, k]
                dp += a * a
                dm += b * b
            v = min(dp, dm)
            if v < best:
                best = v
        out[i] = math.sqrt(best)
    return out


# ---------------------------------------------------------------------------
# S^3 -> R^3


def _rotation_to_pole(pole):
    """Rotation in SO(4) taking ``pole`` to e4."""
    v = pole / np.linalg.norm(pole)
    Q, _ = np.linalg.qr(np.column_stack([v, np.eye(4)[:, :3]]))
    Q[:, 0] *= np.sign(Q[:, 0] @ v)
    R = np.column_stack([Q[:, 1], Q[:, 2], Q[:, 3], Q[:, 0]]).T
    if np.linalg.det(R) < 0:
        R[0] = -R[0]
    return R


def choose_pole(point_sets, rng, n_candidates=300):
    pts = np.vstack(point_sets)
    cand = rng.standard_normal((n_candidates, 4))
    cand /= np.linalg.norm(cand, axis=1)[:, None]
    score = (cand @ pts.T).max(axis=1)
    return cand[int(np.argmin(score))]


def stereographic(Z, pole):
    """Orientation-preserving stereographic projection from ``pole``."""
    Y = Z @ _rotation_to_pole(pole).T
    return Y[:, :3] / (1.0 - Y[:, 3])[:, None]


def lk_s3(loops_a, loops_b, rng=None):
    """Linking number in S^3 of two collections of closed polygons."""
    rng = rng if rng is not None else np.random.default_rng(0)
    unit = lambda Z: Z / np.linalg.norm(Z, axis=1)[:, None]
    loops_a = [unit(np.asarray(Z, dtype=float)) for Z in loops_a]
    loops_b = [unit(np.asarray(Z, dtype=float)) for Z in loops_b]
    pole = choose_pole(loops_a + loops_b, rng)
    return math.fsum(gauss_linking_r3(stereographic(A, pole), stereographic(B, pole))
                     for A in loops_a for B in loops_b)


# ---------------------------------------------------------------------------
# framings


class Osculating:
    """Push off along the principal normal (the osculating plane)."""

    parity = -1

    def __repr__(self):
        return "Osculating()"

    def __eq__(self, other):
        return isinstance(other, Osculating)

    def __hash__(self):
        return hash("Osculating")


@dataclass(frozen=True, eq=False)
class Blackboard:
    """Push off towards the projection center (the diagram's framing)."""

    center: object

    parity = 1

    @property
    def point(self):
        c = self.center
        p = np.asarray(getattr(c, "point", c), dtype=float)
        return p / np.linalg.norm(p)


OSCULATING = Osculating()


# ---------------------------------------------------------------------------
# sampling the parameter circle


@dataclass
class _Samples:
    """Points z (unit) over angles in [0, pi), plus framing normals."""

    angles: np.ndarray
    z: np.ndarray
    normals: np.ndarray
    wrap: float        # z(angle + pi) = wrap * z(angle)
    normal_wrap: float  # same for the normals
    parity: int         # normal at -z is parity * normal at z


def _normals(vals, framing):
    x, x1 = vals[0], vals[1]
    e1 = x / np.linalg.norm(x, axis=1)[:, None]
    u = x1 - np.sum(x1 * e1, axis=1)[:, None] * e1
    e2 = u / np.linalg.norm(u, axis=1)[:, None]
    if isinstance(framing, Blackboard):
        v = np.broadcast_to(framing.point, x.shape)
    else:
        v = vals[2]
    w = v - np.sum(v * e1, axis=1)[:, None] * e1 - np.sum(v * e2, axis=1)[:, None] * e2
    nw = np.linalg.norm(w, axis=1)
    ref = np.linalg.norm(v, axis=1)
    return w, nw, ref


def _evaluate(curve, angles, framing):
    order = 2 if framing is not None else 0
    vals = circle_eval(curve.coeffs, angles, order)
    z = vals[0] / np.linalg.norm(vals[0], axis=1)[:, None]
    if framing is None:
        return z, None
    w, nw, ref = _normals(vals, framing)
    if np.any(nw <= 1e-9 * ref):
        raise FramingDegenerate(f"{framing!r} normal vanishes near angle "
                                f"{angles[int(np.argmin(nw / ref))]:.6g}")
    return z, w / nw[:, None]


def _arclength(z, wrap):
    seg = np.linalg.norm(np.diff(np.vstack([z, wrap * z[:1]]), axis=0), axis=1)
    return np.concatenate([[0.0], np.cumsum(seg)])


def _initial_angles(curve, n_per_length, cfg):
    fine = np.linspace(0.0, np.pi, 4096, endpoint=False)
    z = circle_eval(curve.coeffs, fine)[0]
    z /= np.linalg.norm(z, axis=1)[:, None]
    wrap = (-1.0) ** curve.degree
    s = _arclength(z, wrap)
    L = s[-1]
    n = int(math.ceil(max(n_per_length(L), 16)))
    target = np.linspace(0.0, L, n, endpoint=False)
    return np.interp(target, s, np.append(fine, np.pi)), L


def sample_curve(curve, cfg=None, framing=None, density=1.0, others=(), max_points=60000):
    """Adaptive samples of the projective loop, angles in [0, pi).

    The base count is 1/quad_step per loop, or more so that chords stay
    below 5 * quad_step.  Segments are then bisected wherever the chord
    exceeds a quarter of the distance to another strand (or to any curve in
    ``others``), or where the framing normal turns by more than 0.2.
    """
    cfg = cfg or DEFAULT_CONFIG
    q = cfg.quad_step / density
    if framing is not None and isinstance(framing, Osculating):
        infl = inflection_points(curve, cfg)
        if infl:
            raise FramingDegenerate(f"osculating framing undefined: curvature vanishes at t={infl}")
    angles, L = _initial_angles(curve, lambda L: max(1.0 / q, L / (5 * q)), cfg)
    wrap = (-1.0) ** curve.degree
    parity = framing.parity if framing is not None else 1
    nwrap = wrap if parity == -1 else 1.0
    other_pts = [o for o in others]
    for _ in range(40):
        z, nrm = _evaluate(curve, angles, framing)
        s = _arclength(z, wrap)
        gaps = _strand_gaps(z, s[:-1], s[-1])
        for W in other_pts:
            gaps = np.minimum(gaps, _cross_gaps(z, W))
        if not np.all(np.isfinite(gaps) | np.isinf(gaps)):
            raise SamplingTooCoarse("invalid gap estimate")
        nxt_z = np.vstack([z[1:], wrap * z[:1]])
        chord = np.linalg.norm(nxt_z - z, axis=1)
        bound = 0.25 * np.minimum(gaps, np.roll(gaps, -1))
        bad = chord > np.minimum(bound, 5 * q)
        if nrm is not None:
            nxt_n = np.vstack([nrm[1:], nwrap * nrm[:1]])
            bad |= np.linalg.norm(nxt_n - nrm, axis=1) > 0.2
        if not bad.any():
            return _Samples(angles, z, nrm, wrap, nwrap, parity), gaps
        nxt_a = np.append(angles[1:], angles[0] + np.pi)
        mids = 0.5 * (angles[bad] + nxt_a[bad])
        mids = np.where(mids >= np.pi, mids - np.pi, mids)
        angles = np.sort(np.concatenate([angles, mids]))
        if len(angles) > max_points or np.min(np.diff(angles)) < 1e-13:
            break
    raise SamplingTooCoarse("could not resolve the curve; strands are too close")


# ---------------------------------------------------------------------------
# lifts


@dataclass(frozen=True, eq=False)
class LiftedLoop:
    """A closed polygon in S^3 (unit vectors in R^4).

    ``closure`` says how one pass over the projective curve closes: "loop"
    when it returns to its start, "antipodal_arc" when it ends at the
    antipode, in which case this loop is the doubled arc.
    """

    samples: np.ndarray
    closure: str
    orientation: int = 1


def _full_preimage(z, wrap, orientation=1):
    if orientation == -1:
        z = z[::-1]
    if wrap < 0:
        return [LiftedLoop(np.vstack([z, -z]), "antipodal_arc", orientation)]
    return [LiftedLoop(z, "loop", orientation), LiftedLoop(-z, "loop", orientation)]


def lift(obj, cfg=None, density=1.0):
    """Full preimage in S^3 of a curve or of each component of a sampled link."""
    cfg = cfg or DEFAULT_CONFIG
    if isinstance(obj, ParamSpaceCurve):
        smp, _ = sample_curve(obj, cfg, density=density)
        return _full_preimage(smp.z, smp.wrap, obj.orientation)
    if isinstance(obj, SampledLink):
        out = []
        for Z, kind, o in zip(obj.components, obj.closures, obj.orientations):
            out.extend(_full_preimage(Z, -1.0 if kind == "antipodal_arc" else 1.0, o))
        return out
    raise TypeError(f"cannot lift {type(obj).__name__}")


def _loops_for_lk(obj, cfg, density, others):
    if isinstance(obj, ParamSpaceCurve):
        smp, _ = sample_curve(obj, cfg, density=density, others=others)
        return _full_preimage(smp.z, smp.wrap, obj.orientation), smp.z
    loops = lift(obj, cfg)
    return loops, np.vstack(obj.components)


def lk_raw(A, B, cfg=None, density=1.0):
    """Unrounded linking number in RP^3 (a float close to a half-integer)."""
    cfg = cfg or DEFAULT_CONFIG
    pts_a = _coarse_points(A)
    pts_b = _coarse_points(B)
    if np.min(_cross_gaps(pts_a, pts_b)) <= cfg.geom_tol:
        raise CurvesIntersect("the curves meet")
    la, za = _loops_for_lk(A, cfg, density, (pts_b,))
    lb, zb = _loops_for_lk(B, cfg, density, (za,))
    dmin = float(np.min(_cross_gaps(za, zb)))
    if dmin <= cfg.geom_tol:
        raise CurvesIntersect(f"the curves come within {dmin:.3g}")
    for obj, Z in ((A, za), (B, zb)):
        if isinstance(obj, SampledLink):
            step = max(np.max(np.linalg.norm(np.diff(C, axis=0), axis=1)) for C in obj.components)
            if step > dmin:
                raise SamplingTooCoarse("sample spacing exceeds the distance between the curves")
    rng = cfg.rng("pole")
    val = lk_s3([L.samples for L in la], [L.samples for L in lb], rng)
    return 0.5 * val


def _coarse_points(obj):
    if isinstance(obj, ParamSpaceCurve):
        z = circle_eval(obj.coeffs, np.linspace(0, np.pi, 2048, endpoint=False))[0]
        return z / np.linalg.norm(z, axis=1)[:, None]
    return np.vstack(obj.components)


def lk(A, B, cfg=None):
    """Linking number in RP^3 of two disjoint curves, as a half-integer."""
    return HalfInt.from_float(lk_raw(A, B, cfg))


# ---------------------------------------------------------------------------
# push-offs and self-linking


def _ribbon(curve, framing, cfg, density):
    smp, gaps = sample_curve(curve, cfg, framing=framing, density=density)
    return smp, float(np.min(gaps))


def _pushed(smp, eps):
    # second half of the preimage: the antipodal representative -z
    Zp = smp.z + eps * smp.normals
    Zp2 = -smp.z + eps * smp.parity * smp.normals
    return Zp, Zp2


def default_eps(min_gap):
    return min(1e-3, min_gap / 10.0)


def push_off(curve, framing=OSCULATING, eps=None, cfg=None, density=1.0):
    """The push-off curve as a one-component SampledLink.

    When the pushed curve closes after one pass (an annulus) the component
    covers one pass; otherwise (a Moebius band) it covers two passes.
    """
    cfg = cfg or DEFAULT_CONFIG
    smp, gap = _ribbon(curve, framing, cfg, density)
    eps = default_eps(gap) if eps is None else eps
    Zp, Zp2 = _pushed(smp, eps)
    if smp.wrap == smp.normal_wrap:
        comp = Zp
    else:
        comp = np.vstack([Zp, Zp2])
    if curve.orientation == -1:
        comp = comp[::-1]
    return SampledLink((comp,), (curve.orientation,), max_step=1.0)


def _self_linking_raw(smp, eps, cfg, orientation=1):
    Zp, Zp2 = _pushed(smp, eps)
    if smp.wrap < 0:
        base = [np.vstack([smp.z, -smp.z])]
        pushed = [np.vstack([Zp, Zp2])]
    else:
        base = [smp.z, -smp.z]
        pushed = [Zp, Zp2]
    if orientation == -1:
        base = [b[::-1] for b in base]
        pushed = [p[::-1] for p in pushed]
    return 0.5 * lk_s3(base, pushed, cfg.rng("pole"))


@dataclass(frozen=True)
class SelfLinkingResult:
    value: HalfInt
    raw: float
    raw_half_eps: float
    eps: float
    samples: int


def self_linking_detail(curve, framing=OSCULATING, cfg=None, density=1.0):
    cfg = cfg or DEFAULT_CONFIG
    smp, gap = _ribbon(curve, framing, cfg, density)
    eps = default_eps(gap)
    r1 = _self_linking_raw(smp, eps, cfg, curve.orientation)
    r2 = _self_linking_raw(smp, eps / 2, cfg, curve.orientation)
    v1, v2 = HalfInt.from_float(r1), HalfInt.from_float(r2)
    if v1 != v2:
        raise UnstableEps(f"self-linking changes from {v1} to {v2} when eps is halved")
    return SelfLinkingResult(v1, r1, r2, eps, len(smp.angles))


def self_linking(curve, framing=OSCULATING, cfg=None):
    """Self-linking number of the curve for the given framing (a half-integer).

    For the osculating framing this is the invariant osc(A).  For the
    blackboard framing of a center p it equals the sum of the real crossing
    signs of the diagram from p.
    """
    return self_linking_detail(curve, framing, cfg).value


def blackboard_from_diagram(diagram):
    """Blackboard self-linking read off a diagram: the sum of crossing signs."""
    return HalfInt(2 * sum(c.sign for c in diagram.crossings))
