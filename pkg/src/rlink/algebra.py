"""Polynomial kernel: univariate roots, resultants, binary forms and a
bivariate eliminator for secant pairs of rational plane curves.

Coefficient arrays are ascending: ``c[j]`` multiplies ``t**j``.  A binary
form of degree ``n`` stored as ``c`` means ``sum c[j] s**(n-j) t**j``, so the
affine chart ``s = 1`` reads the same array as an ordinary polynomial.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import comb

import numpy as np
import scipy.linalg as sla
from numpy.polynomial import polynomial as P

from .errors import NoConvergence, ZeroPolynomial

_EPS = np.finfo(float).eps

# A fixed, "random-looking" rotation of the parameter circle.  Using a
# constant keeps every result reproducible without threading an RNG through.
DEFAULT_CHART_ANGLE = 0.5772156649015329


@dataclass(frozen=True)
class ToleranceConfig:
    root_tol: float = 1e-11
    cluster_tol: float = 1e-7
    geom_tol: float = 1e-6
    quad_step: float = 2e-3
    seed: int = 0

    def __post_init__(self):
        for name in ("root_tol", "cluster_tol", "geom_tol", "quad_step"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive, got {v!r}")
        if self.quad_step >= 0.5:
            raise ValueError("quad_step must be well below 1")

    def rng(self, *keys):
        """Deterministic generator for a named sub-stream."""
        words = [int(self.seed) & 0xFFFFFFFF]
        for k in keys:
            if isinstance(k, str):
                words.extend(k.encode())
            else:
                words.append(int(k) & 0xFFFFFFFF)
        return np.random.default_rng(words)


DEFAULT_CONFIG = ToleranceConfig()


def parse_coefficient(x):
    """Accept ints, floats, or strings such as ``"3/7"`` and ``"-0.25"``."""
    if isinstance(x, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(x, (int, float, np.integer, np.floating)):
        return float(x)
    if isinstance(x, str):
        return float(Fraction(x.strip()))
    raise TypeError(f"cannot read coefficient {x!r}")


class Poly:
    """Univariate polynomial with complex coefficients, ascending order.

    Trailing coefficients with ``|c| <= tol * max|c|`` are stripped, so the
    leading coefficient is always significant.  The zero polynomial has no
    coefficients; ``is_zero`` is the flag for degree minus infinity and
    ``degree`` returns -1 for it.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, tol=0.0):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex)).ravel().copy()
        scale = float(np.max(np.abs(c))) if c.size else 0.0
        n = c.size
        while n > 0 and abs(c[n - 1]) <= tol * scale:
            n -= 1
        self.coeffs = c[:n]

    @classmethod
    def from_roots(cls, roots, lead=1.0):
        return cls(lead * P.polyfromroots(np.asarray(roots, dtype=complex)))

    @property
    def is_zero(self):
        return self.coeffs.size == 0

    @property
    def degree(self):
        return self.coeffs.size - 1

    def __call__(self, x):
        if self.is_zero:
            return np.zeros_like(np.asarray(x, dtype=complex))
        return P.polyval(x, self.coeffs)

    def deriv(self, m=1):
        if self.coeffs.size <= m:
            return Poly([])
        return Poly(P.polyder(self.coeffs, m))

    def _other(self, q):
        return q if isinstance(q, Poly) else Poly(q)

    def __add__(self, q):
        q = self._other(q)
        return Poly(P.polyadd(self.coeffs, q.coeffs) if self.coeffs.size and q.coeffs.size
                    else (self.coeffs if self.coeffs.size else q.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-self.coeffs)

    def __sub__(self, q):
        return self + (-self._other(q))

    def __mul__(self, q):
        if np.isscalar(q):
            return Poly(self.coeffs * q)
        q = self._other(q)
        if self.is_zero or q.is_zero:
            return Poly([])
        return Poly(P.polymul(self.coeffs, q.coeffs))

    __rmul__ = __mul__

    def conj(self):
        return Poly(self.coeffs.conj())

    def is_real(self, tol=0.0):
        if self.is_zero:
            return True
        return float(np.max(np.abs(self.coeffs.imag))) <= tol * float(np.max(np.abs(self.coeffs)))

    def __repr__(self):
        return f"Poly({np.array2string(self.coeffs, precision=6)})"


@dataclass(frozen=True)
class RootCluster:
    center: complex
    multiplicity: int
    radius: float = 0.0

    @property
    def is_real(self):
        return self.center.imag == 0.0


def _as_coeffs(p):
    if isinstance(p, Poly):
        return p.coeffs
    return Poly(p).coeffs


def _taylor(c, z):
    """Taylor coefficients of c at z and their rounding scales."""
    n = len(c) - 1
    a = np.zeros(n + 1, dtype=complex)
    s = np.zeros(n + 1)
    az = abs(z)
    for k in range(n + 1):
        j = np.arange(k, n + 1)
        b = np.array([comb(int(jj), k) for jj in j], dtype=float)
        a[k] = np.sum(c[k:] * b * z ** (j - k))
        s[k] = np.sum(np.abs(c[k:]) * b * az ** (j - k))
    return a, s


def _newton_polish(c, m, z, iters=8):
    """Newton on the (m-1)-th derivative, where an m-fold root is simple."""
    f = P.polyder(c, m - 1) if m > 1 else c
    df = P.polyder(f)
    if len(df) == 0:
        return z
    fz = P.polyval(z, f)
    for _ in range(iters):
        dz = P.polyval(z, df)
        if dz == 0:
            break
        zn = z - fz / dz
        fn = P.polyval(zn, f)
        if not np.isfinite(zn) or abs(fn) >= abs(fz):
            break
        z, fz = zn, fn
    return z


def _split_group(z, idx):
    """Split a single-linkage group at its longest spanning-tree edge."""
    pts = z[idx]
    m = len(idx)
    in_tree = [0]
    best = np.abs(pts - pts[0])
    parent = np.zeros(m, dtype=int)
    edges = []
    rest = set(range(1, m))
    while rest:
        j = min(rest, key=lambda r: best[r])
        edges.append((best[j], parent[j], j))
        rest.discard(j)
        in_tree.append(j)
        d = np.abs(pts - pts[j])
        upd = d < best
        parent[upd] = j
        best = np.minimum(best, d)
    _, a, b = max(edges)
    adj = {i: [] for i in range(m)}
    for _, u, v in edges:
        if (u, v) != (a, b):
            adj[u].append(v)
            adj[v].append(u)
    side, stack = {a}, [a]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in side:
                side.add(v)
                stack.append(v)
    left = [idx[i] for i in range(m) if i in side]
    right = [idx[i] for i in range(m) if i not in side]
    return left, right


def _components(z, radius):
    n = len(z)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= radius * (1 + max(abs(z[i]), abs(z[j]))):
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _cluster(c, z, cfg):
    # Candidate groups are gathered loosely, then accepted as an m-fold root
    # only when the first m Taylor coefficients at the centroid are at the
    # rounding level; otherwise they are split.
    out = []
    todo = _components(z, 1e-2)
    while todo:
        g = todo.pop()
        if len(g) == 1:
            out.append(g)
            continue
        ctr = np.mean(z[g])
        a, s = _taylor(c, ctr)
        m = len(g)
        if np.all(np.abs(a[:m]) <= cfg.root_tol * s[:m] + 1e-300):
            out.append(g)
        else:
            todo.extend(_split_group(z, g))
    # groups whose centers are closer than cluster_tol are one root
    centers = np.array([np.mean(z[g]) for g in out])
    merged = _components(centers, cfg.cluster_tol)
    clusters = []
    for mg in merged:
        members = [i for k in mg for i in out[k]]
        ctr = complex(np.mean(z[members]))
        rad = float(np.max(np.abs(z[members] - ctr))) if len(members) > 1 else 0.0
        clusters.append([ctr, len(members), max(rad, 4 * _EPS * (1 + abs(ctr)))])
    return clusters


def find_roots(p, cfg=None):
    """All complex roots of ``p`` grouped into clusters with multiplicity.

    Multiplicities sum to the degree.  For real input the real roots are
    returned with zero imaginary part and the rest in exact conjugate pairs.
    """
    cfg = cfg or DEFAULT_CONFIG
    poly = p if isinstance(p, Poly) else Poly(p)
    if poly.is_zero:
        raise ZeroPolynomial("the zero polynomial has no root set")
    c = poly.coeffs
    real_input = poly.is_real(0.0)
    k0 = 0
    while c[k0] == 0:
        k0 += 1
    c = c[k0:]
    clusters = []
    if len(c) > 1:
        z = P.polyroots(c).astype(complex)
        if not np.all(np.isfinite(z)):
            raise NoConvergence("companion eigenvalues are not finite")
        clusters = _cluster(c, z, cfg)
        for cl in clusters:
            cl[0] = complex(_newton_polish(c, cl[1], cl[0]))
        res = np.array([abs(P.polyval(cl[0], P.polyder(c, cl[1] - 1) if cl[1] > 1 else c))
                        for cl in clusters])
        dscale = np.array([P.polyval(abs(cl[0]), np.abs(P.polyder(c, cl[1] - 1) if cl[1] > 1 else c))
                           for cl in clusters])
        if np.any(res > 1e-6 * dscale):
            raise NoConvergence("root polish failed", residuals=res / dscale)
    if k0:
        near = [cl for cl in clusters if abs(cl[0]) <= cfg.cluster_tol]
        if near:
            near[0][1] += k0
            near[0][0] = 0j
        else:
            clusters.append([0j, k0, 0.0])
    if real_input:
        for cl in clusters:
            if abs(cl[0].imag) <= cfg.cluster_tol * (1 + abs(cl[0])):
                cl[0] = complex(cl[0].real, 0.0)
        upper = [cl for cl in clusters if cl[0].imag > 0]
        lower = [cl for cl in clusters if cl[0].imag < 0]
        for cl in upper:
            cand = [q for q in lower if q[1] == cl[1]]
            if not cand:
                continue
            q = min(cand, key=lambda q: abs(q[0] - cl[0].conjugate()))
            lower.remove(q)
            r = max(cl[2], q[2], abs(q[0] - cl[0].conjugate()))
            q[0] = cl[0].conjugate()
            cl[2] = q[2] = r
    clusters.sort(key=lambda cl: (cl[0].real, cl[0].imag))
    return [RootCluster(complex(a), int(m), float(r)) for a, m, r in clusters]


def real_roots_with_multiplicity(p, cfg=None):
    poly = p if isinstance(p, Poly) else Poly(p)
    if not poly.is_real(0.0):
        raise ValueError("real_roots_with_multiplicity needs real coefficients")
    return [(cl.center.real, cl.multiplicity) for cl in find_roots(poly, cfg) if cl.is_real]


def sylvester_matrix(p, q):
    a = _as_coeffs(p)[::-1]
    b = _as_coeffs(q)[::-1]
    m, n = len(a) - 1, len(b) - 1
    S = np.zeros((m + n, m + n), dtype=complex)
    for r in range(n):
        S[r, r:r + m + 1] = a
    for r in range(m):
        S[n + r, r:r + n + 1] = b
    return S


def resultant(p, q):
    """Sylvester resultant.  Zero exactly when p and q share a root."""
    a, b = _as_coeffs(p), _as_coeffs(q)
    if a.size == 0 or b.size == 0:
        return 0.0
    if len(a) == 1 and len(b) == 1:
        return 1.0
    val = np.linalg.det(sylvester_matrix(a, b))
    if np.isrealobj(a) or (np.all(a.imag == 0) and np.all(b.imag == 0)):
        return float(val.real)
    return complex(val)


def share_root(p, q, cfg=None):
    """Resultant test scaled by the coefficient norms."""
    cfg = cfg or DEFAULT_CONFIG
    a, b = _as_coeffs(p), _as_coeffs(q)
    m, n = len(a) - 1, len(b) - 1
    scale = np.linalg.norm(a) ** n * np.linalg.norm(b) ** m
    return abs(resultant(a, b)) <= cfg.root_tol * scale


# ---------------------------------------------------------------------------
# binary forms


def rotate_form(coeffs, angle):
    """Substitute (s, t) = (c*s' - S*t', S*s' + c*t') in forms of degree n.

    Works row-wise on a 2-D array.  Rows of the result are in the rotated
    chart; a root u there corresponds to ``t = chart_to_param(u, angle)``.
    """
    c = np.asarray(coeffs)
    flat = c.reshape(-1, c.shape[-1])
    n = flat.shape[1] - 1
    cs, sn = np.cos(angle), np.sin(angle)
    sp = [np.array([1.0])]
    tp = [np.array([1.0])]
    for _ in range(n):
        sp.append(P.polymul(sp[-1], [cs, -sn]))
        tp.append(P.polymul(tp[-1], [sn, cs]))
    basis = np.zeros((n + 1, n + 1))
    for j in range(n + 1):
        b = P.polymul(sp[n - j], tp[j])
        basis[j, :len(b)] = b
    out = flat @ basis
    return out.reshape(c.shape)


def chart_to_param(u, angle):
    """Map a rotated-chart parameter back to t (``inf`` for the point s = 0)."""
    cs, sn = np.cos(angle), np.sin(angle)
    if np.isinf(abs(u)):
        return -cs / sn
    den = cs - sn * u
    if abs(den) <= 1e-10 * abs(sn + cs * u):
        return np.inf
    return (sn + cs * u) / den


def param_to_chart(t, angle):
    cs, sn = np.cos(angle), np.sin(angle)
    if np.isinf(abs(t)):
        return cs / sn
    return (cs * t - sn) / (cs + sn * t)


def form_roots(coeffs, cfg=None, angle=DEFAULT_CHART_ANGLE):
    """Roots of a binary form, including the point at infinity.

    Returns (t, multiplicity) with complex t; t is ``complex(inf, 0)`` for
    s = 0.  Real roots come back with zero imaginary part.
    """
    cfg = cfg or DEFAULT_CONFIG
    coeffs = np.asarray(coeffs, dtype=float)
    rot = rotate_form(coeffs, angle)
    poly = Poly(rot, tol=cfg.root_tol)
    if poly.is_zero:
        raise ZeroPolynomial("form vanishes identically")
    out = []
    for cl in (find_roots(poly, cfg) if poly.degree > 0 else []):
        t = chart_to_param(cl.center.real if cl.is_real else cl.center, angle)
        if cl.is_real:
            t = complex(float(np.real(t)), 0.0)
        out.append((complex(t), cl.multiplicity))
    deficit = (len(coeffs) - 1) - poly.degree
    if deficit > 0:
        out.append((complex(chart_to_param(np.inf, angle), 0.0), deficit))
    return out


def form_real_roots(coeffs, cfg=None, angle=DEFAULT_CHART_ANGLE):
    """Real roots (t, multiplicity) of a real binary form, t may be inf."""
    return sorted(((z.real, m) for z, m in form_roots(coeffs, cfg, angle) if z.imag == 0),
                  key=lambda r: r[0])


# ---------------------------------------------------------------------------
# polynomial matrices


def poly_det(mat):
    """Determinant of a small square matrix whose entries are coefficient arrays."""
    k = len(mat)
    total = np.zeros(1)
    for perm in permutations(range(k)):
        sign = 1
        for i in range(k):
            for j in range(i + 1, k):
                if perm[i] > perm[j]:
                    sign = -sign
        term = np.ones(1)
        for i in range(k):
            term = P.polymul(term, mat[i][perm[i]])
        total = P.polyadd(total, sign * term)
    return total


def wronskian_minors(rows, k):
    """All k x k minors of [X, X', ..., X^(k-1)] for the rows of X.

    The result is truncated to its nominal degree k*(n-k+1), where n is the
    row degree; higher coefficients cancel exactly in exact arithmetic.
    Returns a dict keyed by the row-index tuple.
    """
    rows = np.asarray(rows)
    n = rows.shape[1] - 1
    ders = [[rows[i]] for i in range(rows.shape[0])]
    for i in range(rows.shape[0]):
        for _ in range(1, k):
            prev = ders[i][-1]
            ders[i].append(P.polyder(prev) if len(prev) > 1 else np.zeros(1))
    top = max(k * (n - k + 1), 0)
    out = {}
    from itertools import combinations
    for idx in combinations(range(rows.shape[0]), k):
        mat = [[ders[i][j] for j in range(k)] for i in idx]
        det = poly_det(mat)
        res = np.zeros(top + 1, dtype=det.dtype)
        m = min(len(det), top + 1)
        res[:m] = det[:m]
        out[idx] = res
    return out


def wronskian(rows):
    """det[X, X', ..., X^(m-1)] for an m-row curve, nominal degree m(n-m+1)."""
    rows = np.asarray(rows)
    return wronskian_minors(rows, rows.shape[0])[tuple(range(rows.shape[0]))]


def cross_rows(rows):
    """Rows of X x X' for a 3-row curve, nominal degree 2n-2 (the dual curve)."""
    m = wronskian_minors(rows, 2)
    return np.array([m[(1, 2)], -m[(0, 2)], m[(0, 1)]])


# ---------------------------------------------------------------------------
# secant pairs of plane curves


def divided_minor(a, b):
    """Coefficients Q[i, j] of (a(x)b(y) - b(x)a(y)) / (x - y) in x^i y^j."""
    a = np.asarray(a)
    b = np.asarray(b)
    n = len(a)
    A = np.outer(a, b) - np.outer(b, a)
    Q = np.zeros((n - 1, n - 1), dtype=A.dtype)
    for i in range(n):
        for j in range(i):
            c = A[i, j]
            if c == 0:
                continue
            k = i - j
            for m in range(k):
                Q[j + m, j + k - 1 - m] += c
    return Q


def sylvester_pencil(Q1, Q2):
    """Sylvester matrix in y of two bivariate polynomials, as a matrix
    polynomial in x: ``S[k]`` multiplies ``x**k``."""
    m = Q1.shape[1] - 1
    n = Q2.shape[1] - 1
    dx = max(Q1.shape[0], Q2.shape[0]) - 1
    N = m + n
    S = np.zeros((dx + 1, N, N), dtype=complex)
    for r in range(n):
        for j in range(m + 1):
            S[:Q1.shape[0], r, r + j] = Q1[:, m - j]
    for r in range(m):
        for j in range(n + 1):
            S[:Q2.shape[0], n + r, r + j] = Q2[:, n - j]
    return S


def polynomial_eigenvalues(S):
    """Finite eigenvalues of the matrix polynomial sum S[k] x^k (companion pencil)."""
    k = S.shape[0] - 1
    N = S.shape[1]
    if k == 0 or N == 0:
        return np.zeros(0, dtype=complex)
    A = np.zeros((k * N, k * N), dtype=complex)
    B = np.eye(k * N, dtype=complex)
    B[:N, :N] = S[k]
    for j in range(k):
        A[:N, j * N:(j + 1) * N] = -S[k - 1 - j]
    for j in range(1, k):
        A[j * N:(j + 1) * N, (j - 1) * N:j * N] = np.eye(N)
    return sla.eigvals(A, B)


def _pair_residual(Qs, dQs, a, b):
    F = np.array([P.polyval2d(a, b, Q) for Q in Qs])
    J = np.array([[P.polyval2d(a, b, dx), P.polyval2d(a, b, dy)] for dx, dy in dQs])
    return F, J


def _polish_pair(Qs, a, b, iters=12):
    dQs = [(P.polyder(Q, axis=0), P.polyder(Q, axis=1)) for Q in Qs]
    scale = sum(np.abs(Q).sum() for Q in Qs)
    z = np.array([a, b], dtype=complex)
    F, J = _pair_residual(Qs, dQs, *z)
    best = np.linalg.norm(F)
    for _ in range(iters):
        step = np.linalg.lstsq(J, -F, rcond=None)[0]
        zn = z + step
        Fn, Jn = _pair_residual(Qs, dQs, *zn)
        rn = np.linalg.norm(Fn)
        if not np.isfinite(rn) or rn >= best:
            break
        z, F, J, best = zn, Fn, Jn, rn
        if np.linalg.norm(step) <= 4 * _EPS * (1 + np.linalg.norm(z)):
            break
    w = np.maximum(1.0, np.abs(z))
    n = max(Q.shape[0] for Q in Qs) - 1
    return complex(z[0]), complex(z[1]), best / (scale * float(np.prod(w)) ** n)


def _random_rotation(rng, k=3):
    q, r = np.linalg.qr(rng.standard_normal((k, k)))
    return q * np.sign(np.diag(r))


class _EliminationFailure(Exception):
    pass


def _secant_attempt(rows, cusps, rot, cfg):
    C = rot @ rows
    n = C.shape[1] - 1
    expected = (n - 1) * (n - 2) - 2 * len(cusps)
    if n < 3 or expected <= 0:
        return []
    Q01 = divided_minor(C[0], C[1])
    Q02 = divided_minor(C[0], C[2])
    Q12 = divided_minor(C[1], C[2])
    ev = polynomial_eigenvalues(sylvester_pencil(Q01, Q02))
    if not np.all(np.isfinite(ev)) or len(ev) != 2 * (n - 1) ** 2:
        raise _EliminationFailure("infinite eigenvalue")
    ev = list(ev)
    removals = [(r, n - 1) for r in P.polyroots(C[0])]
    removals += [(complex(r), 2) for r in cusps]
    for r, k in removals:
        for _ in range(k):
            j = int(np.argmin([abs(e - r) for e in ev]))
            if abs(ev[j] - r) > 1e-4 * (1 + abs(r)):
                raise _EliminationFailure("extraneous eigenvalue not found")
            ev.pop(j)
    if len(ev) != expected:
        raise _EliminationFailure("wrong eigenvalue count")
    if not ev:
        return []
    ev = np.array(ev)
    pts = np.array([P.polyval(e, C.T) for e in ev])
    nrm = np.linalg.norm(pts, axis=1)
    if np.any(nrm == 0):
        raise _EliminationFailure("base point")
    pts = pts / nrm[:, None]
    G = np.abs(pts.conj() @ pts.T)
    np.fill_diagonal(G, -1.0)
    free = set(range(len(ev)))
    pairs = []
    while free:
        idx = sorted(free)
        sub = G[np.ix_(idx, idx)]
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        if sub[i, j] < 1 - 1e-5:
            raise _EliminationFailure("unmatched node parameter")
        a, b = idx[i], idx[j]
        free -= {a, b}
        pairs.append((ev[a], ev[b]))
    out = []
    Qs = (Q01, Q02, Q12)
    for a, b in pairs:
        a2, b2, res = _polish_pair(Qs, a, b)
        if res > 1e-8:
            raise _EliminationFailure("node residual too large")
        out.append((a2, b2))
    return out


def secant_pairs(rows, cfg=None, cusps=(), rng=None, attempts=6):
    """Unordered parameter pairs {t1, t2}, t1 != t2, with X(t1) ~ X(t2).

    ``rows`` are the three coefficient rows (binary forms of degree n) of a
    rational plane curve with ``(n-1)(n-2)/2`` nodes counted over C.  Points
    listed in ``cusps`` (parameters, complex allowed) are stationary points
    whose diagonal contribution has to be discarded.

    The two divided minors q01, q02 vanish on the node pairs and also on
    pairs of roots of the first coordinate; the latter are removed
    analytically.  Returns pairs in the original chart (``inf`` allowed).
    """
    cfg = cfg or DEFAULT_CONFIG
    rng = rng if rng is not None else cfg.rng("secants")
    rows = np.asarray(rows, dtype=float)
    last = None
    for k in range(attempts):
        angle = DEFAULT_CHART_ANGLE if k == 0 else rng.uniform(0, np.pi)
        rot_rows = rotate_form(rows, angle)
        ucusps = [param_to_chart(c, angle) for c in cusps]
        try:
            pairs = _secant_attempt(rot_rows, ucusps, _random_rotation(rng), cfg)
        except (_EliminationFailure, np.linalg.LinAlgError) as exc:
            last = exc
            continue
        return [(complex(chart_to_param(a, angle)), complex(chart_to_param(b, angle)))
                for a, b in pairs]
    raise NoConvergence(f"secant elimination failed: {last}")
