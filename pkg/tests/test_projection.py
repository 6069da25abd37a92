import numpy as np
import pytest

from rlink import catalog
from rlink.algebra import DEFAULT_CONFIG
from rlink.curves import chart_eval
from rlink.errors import CenterOnCurve, DegreeDrop
from rlink.projection import (ProjectionCenter, build_diagram, generic_diagrams, klein_check,
                              plane_diagram, project, projection_basis)


def _affine_crossing_sign(curve, p, t1, t2, rng):
    """Crossing sign in an affine chart whose plane at infinity contains p."""
    q = np.linalg.svd(p[None, :])[2][1:]       # basis of p-perp
    w = rng.standard_normal(3) @ q
    rest = np.linalg.svd(w[None, :])[2][1:]    # affine coordinates
    if np.linalg.det(np.vstack([w, rest])) < 0:   # orient the chart
        rest[0] = -rest[0]

    def point_and_tangent(t):
        x, v = chart_eval(curve.coeffs, t, 1)
        wx = w @ x
        y = rest @ x / wx
        dy = (rest @ v * wx - rest @ x * (w @ v)) / wx ** 2
        return y, dy

    y1, d1 = point_and_tangent(t1)
    y2, d2 = point_and_tangent(t2)
    return int(np.sign(np.linalg.det(np.array([d1, d2, y1 - y2]))))


def test_projection_basis_orientation():
    p = np.array([0.3, -1.0, 0.2, 0.5])
    M = projection_basis(p)
    assert np.allclose(M @ M.T, np.eye(3))
    assert np.linalg.det(np.vstack([M, ProjectionCenter(p).point])) == pytest.approx(1.0)


def test_center_on_curve_raises():
    X = catalog.twisted_cubic()
    with pytest.raises(CenterOnCurve):
        project(X, X.point(0.4))


def test_center_at_point_at_infinity_drops_degree():
    # (0, 0, 0, 1) is X(inf); the projected rows share the factor s
    with pytest.raises(DegreeDrop):
        project(catalog.twisted_cubic(), [0, 0, 0, 1])


def test_center_on_imaginary_secant_gives_solitary_point():
    X = catalog.twisted_cubic()
    # X(i) + X(-i) is real and lies on the secant of a conjugate pair
    p = np.real(X.point(1j) + X.point(-1j))
    D = build_diagram(X, p)
    assert (D.census.h, D.census.e) == (0, 1)
    assert sorted(abs(s.tau.imag) for s in D.solitary) == [pytest.approx(1.0)]


@pytest.mark.parametrize("make,expected", [
    (catalog.conic, (0, 0, 0, 0)),
    (catalog.crunodal_cubic, (1, 0, 1, 0)),
    (catalog.acnodal_cubic, (3, 0, 0, 0)),
])
def test_klein_on_plane_curves(make, expected):
    D = plane_diagram(make())
    r = klein_check(D)
    assert (r.F, r.B, r.h, r.i) == expected
    assert r.passed
    assert r.line().endswith("PASS")


def test_acnodal_census():
    c = plane_diagram(catalog.acnodal_cubic()).census
    assert (c.h, c.e, c.i) == (0, 1, 0)


def test_crossing_signs_match_affine_oracle():
    rng = np.random.default_rng(11)
    checked = 0
    for d in (3, 4, 5):
        X = catalog.random_smooth_curve(d, rng)
        for D in generic_diagrams(X, 3, DEFAULT_CONFIG, rng):
            for c in D.crossings:
                assert c.sign == _affine_crossing_sign(X, D.center.point, c.over, c.under, rng)
                checked += 1
    assert checked > 0


def test_twisted_cubic_crossing_is_positive():
    X = catalog.twisted_cubic()
    p = X.point(-0.7) + 1.3 * X.point(0.9)
    D = build_diagram(X, p)
    assert D.census.h == 1
    assert [c.sign for c in D.crossings] == [1]
    assert [c.sign for c in build_diagram(X.mirrored(), p * [1, 1, 1, -1]).crossings] == [-1]


def test_census_closes_with_even_imaginary_count():
    rng = np.random.default_rng(5)
    for d in (3, 4, 5, 6):
        X = catalog.kostlan_curve(d, rng)
        for D in generic_diagrams(X, 2, DEFAULT_CONFIG, rng):
            c = D.census
            assert c.h + c.e + c.i == (d - 1) * (d - 2) // 2
            assert c.i % 2 == 0


def test_klein_on_random_projections_with_bitangents():
    rng = np.random.default_rng(6)
    for d in (3, 4, 5):
        X = catalog.kostlan_curve(d, rng)
        for D in generic_diagrams(X, 2, DEFAULT_CONFIG, rng, with_bitangents=True):
            assert klein_check(D).passed


def test_writhe_splits_into_real_and_solitary():
    rng = np.random.default_rng(8)
    X = catalog.random_smooth_curve(4, rng)
    D = generic_diagrams(X, 1, DEFAULT_CONFIG, rng)[0]
    assert D.writhe == D.real_writhe + D.solitary_writhe
    assert D.real_writhe == sum(c.sign for c in D.crossings)
    assert len(D.solitary) == D.census.e
