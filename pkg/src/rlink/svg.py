"""Plain SVG drawing of a diagram: the projected curve in an affine chart."""

import numpy as np

from .curves import circle_eval
from .projection import projection_basis

_SIZE = 480
_PAD = 24


def _chart(Y, rng):
    """Line at infinity meeting the sampled image as little as possible."""
    Yh = Y / np.linalg.norm(Y, axis=1)[:, None]
    cands = rng.standard_normal((300, 3))
    cands /= np.linalg.norm(cands, axis=1)[:, None]
    score = np.min(np.abs(Yh @ cands.T), axis=0)
    ell = cands[int(np.argmax(score))]
    # orthonormal basis of the chart
    u = np.linalg.svd(ell[None, :])[2][1:]
    return ell, u


def _affine(P, ell, u):
    P = np.atleast_2d(P)
    den = P @ ell
    return (P @ u.T) / den[:, None], np.abs(den) / np.linalg.norm(P, axis=1)


def diagram_svg(curve, diagram, n=4000):
    """SVG text: curve as polylines, under-strands gapped, solitary points as
    hollow dots and real flexes as small ticks."""
    M = projection_basis(diagram.center)
    angles = np.linspace(0, np.pi, n + 1)
    Y = (M @ circle_eval(curve.coeffs, angles)[0].T).T
    ell, u = _chart(Y, np.random.default_rng(0))
    xy, near = _affine(Y, ell, u)
    ok = near > 0.05
    lo = np.percentile(xy[ok], 1, axis=0)
    hi = np.percentile(xy[ok], 99, axis=0)
    span = max(float(np.max(hi - lo)), 1e-9) * 1.2
    mid = 0.5 * (lo + hi)

    def to_px(q):
        q = (np.atleast_2d(q) - mid) / span
        return np.column_stack([_SIZE / 2 + q[:, 0] * (_SIZE - 2 * _PAD),
                                _SIZE / 2 - q[:, 1] * (_SIZE - 2 * _PAD)])

    px = to_px(xy)
    inside = ok & np.all(np.abs(px - _SIZE / 2) < _SIZE, axis=1)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE}" height="{_SIZE}" '
           f'viewBox="0 0 {_SIZE} {_SIZE}">',
           f'<rect width="{_SIZE}" height="{_SIZE}" fill="white"/>']
    run = []
    for k in range(len(px)):
        if inside[k]:
            run.append(px[k])
        if (not inside[k] or k == len(px) - 1) and len(run) > 1:
            pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in run)
            out.append(f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="1.5"/>')
        if not inside[k]:
            run = []
    for c in diagram.crossings:
        q, near_c = _affine(np.asarray(c.image, dtype=float), ell, u)
        if near_c[0] <= 0.05:
            continue
        x, y = to_px(q)[0]
        colour = "#c03030" if c.sign > 0 else "#3050c0"
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="5" fill="white" stroke="{colour}"/>')
    for s in diagram.solitary:
        q, near_s = _affine(np.real(np.asarray(s.image)).astype(float), ell, u)
        if near_s[0] <= 0.05:
            continue
        x, y = to_px(q)[0]
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="none" stroke="black"/>')
    for f in diagram.flexes:
        a = np.pi / 2 if np.isinf(f.t) else np.arctan(f.t)
        q, near_f = _affine(M @ circle_eval(curve.coeffs, [a])[0][0], ell, u)
        if near_f[0] <= 0.05:
            continue
        x, y = to_px(q)[0]
        out.append(f'<path d="M{x - 4:.2f},{y:.2f} L{x + 4:.2f},{y:.2f}" stroke="#208020" '
                   'stroke-width="2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
