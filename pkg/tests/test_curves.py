import numpy as np
import pytest
from hypothesis import given, strategies as st

from rlink import catalog
from rlink.curves import (ParamPlaneCurve, ParamSpaceCurve, SampledLink, angle_to_param,
                          chart_eval, circle_eval, inflection_points, min_plane_section_upper_bound,
                          param_to_angle, plane_section_count, real_node_pairs, stationary_points,
                          torsion_polynomial, torsion_sign, torsion_sign_profile,
                          validate_smooth_link)
from rlink.errors import CurvatureVanishes, DegenerateCurve, PlaneContainsCurve


def _numeric_derivs(coeffs, a, h=1e-3):
    f = lambda x: circle_eval(coeffs, [x])[0][0]
    d1 = (f(a + h) - f(a - h)) / (2 * h)
    d2 = (f(a + h) - 2 * f(a) + f(a - h)) / h ** 2
    return f(a), d1, d2


def test_circle_eval_derivatives_match_finite_differences():
    rng = np.random.default_rng(0)
    c = rng.standard_normal((4, 5))
    for a in (0.1, 1.3, 2.9):
        vals = circle_eval(c, [a], 2)
        x, d1, d2 = _numeric_derivs(c, a)
        assert np.allclose(vals[0][0], x)
        assert np.allclose(vals[1][0], d1, atol=1e-5)
        assert np.allclose(vals[2][0], d2, atol=1e-4)


def test_circle_antipodal_sign():
    c = np.random.default_rng(1).standard_normal((4, 4))
    a = 0.4
    assert np.allclose(circle_eval(c, [a + np.pi])[0], -circle_eval(c, [a])[0])


def test_chart_eval_matches_circle():
    c = np.random.default_rng(2).standard_normal((4, 5))
    t = 0.7
    a = param_to_angle(t)
    x = chart_eval(c, t)[0]
    y = circle_eval(c, [a])[0][0]
    assert np.allclose(x / np.linalg.norm(x), y / np.linalg.norm(y))


@given(st.floats(-1e6, 1e6))
def test_param_angle_round_trip(t):
    assert angle_to_param(param_to_angle(t)) == pytest.approx(t, rel=1e-9, abs=1e-9)


def test_constructor_rejects_degenerate():
    with pytest.raises(DegenerateCurve):
        ParamSpaceCurve(np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [1, 1, 0, 0]], float))
    with pytest.raises(DegenerateCurve):
        ParamPlaneCurve(np.array([[1, 0, 0], [0, 1, 0], [1, 1, 0]], float))


def test_twisted_cubic_geometry():
    X = catalog.twisted_cubic()
    assert stationary_points(X) == []
    assert inflection_points(X) == []
    assert torsion_sign(X) == 1
    assert validate_smooth_link(X).ok


def test_mirror_flips_torsion():
    X = catalog.twisted_cubic()
    assert torsion_sign(X.mirrored()) == -1


def test_torsion_polynomial_against_finite_differences():
    rng = np.random.default_rng(3)
    c = rng.standard_normal((4, 6))
    T = torsion_polynomial(ParamSpaceCurve(c))
    # chart t: det[X, X', X'', X'''] with s = 1
    for t in (-0.8, 0.2, 1.1):
        h = 1e-2
        pts = [chart_eval(c, t + k * h)[0] for k in range(-2, 3)]
        x = pts[2]
        d1 = (pts[3] - pts[1]) / (2 * h)
        d2 = (pts[3] - 2 * pts[2] + pts[1]) / h ** 2
        d3 = (pts[4] - 2 * pts[3] + 2 * pts[1] - pts[0]) / (2 * h ** 3)
        det = np.linalg.det(np.array([x, d1, d2, d3]))
        assert np.polynomial.polynomial.polyval(t, T) == pytest.approx(det, rel=2e-3, abs=1e-6)


def test_torsion_profile_covers_circle():
    X = catalog.mixed_sign_quartic()
    pieces = torsion_sign_profile(X)
    zeros = [p for p in pieces if p.sign == 0]
    arcs = [p for p in pieces if p.sign != 0]
    assert len(zeros) == len(arcs)
    assert len(zeros) <= 4


def test_cusp_is_found():
    c = np.zeros((4, 5))
    c[0, 0] = c[1, 2] = c[2, 3] = c[3, 4] = 1.0
    X = ParamSpaceCurve(c)
    assert stationary_points(X) == [pytest.approx(0.0, abs=1e-8)]
    assert not validate_smooth_link(X).ok


def test_self_intersection_is_found():
    c = np.array([[1, 0, 0, 0, 0], [-1, 0, 1, 0, 0], [0, -1, 0, 1, 0], [0, 0, 0, 0, 1]], float)
    X = ParamSpaceCurve(c)
    pairs = real_node_pairs(X)
    assert len(pairs) == 1
    assert sorted(pairs[0]) == pytest.approx([-1, 1], abs=1e-7)
    rep = validate_smooth_link(X)
    assert not rep.ok and rep.node_pairs


def test_curvature_vanishing_raises():
    fam = catalog.flat_point_family()
    X = fam.curve_at(0.0)
    assert inflection_points(X)
    with pytest.raises(CurvatureVanishes):
        torsion_sign_profile(X)


def _brute_section_count(curve, w, n=200001):
    vals = circle_eval(w @ curve.coeffs, np.linspace(0, np.pi, n))[0][:, 0]
    vals = np.append(vals, -vals[0] if curve.degree % 2 else vals[0])
    return int(np.sum(np.sign(vals[1:]) != np.sign(vals[:-1])))


def test_plane_sections_against_sampling():
    rng = np.random.default_rng(4)
    X = catalog.random_smooth_curve(5, rng)
    for _ in range(10):
        w = rng.standard_normal(4)
        assert plane_section_count(X, w) == _brute_section_count(X, w)


def test_plane_containing_line_raises():
    L = catalog.line([1, 0, 0, 0], [0, 1, 0, 0])
    with pytest.raises(PlaneContainsCurve):
        plane_section_count(L, [0, 0, 1, 0])


def test_min_plane_section_bound():
    for d in (3, 4, 5):
        X = catalog.hyperboloid_curve(d) if d > 3 else catalog.twisted_cubic()
        assert min_plane_section_upper_bound(X) <= d - 2


def test_sampled_link_closures():
    a = np.linspace(0, np.pi, 200, endpoint=False)
    line = np.column_stack([np.cos(a), np.sin(a), 0 * a, 0 * a])
    circ = np.column_stack([np.ones_like(a), 0.5 * np.cos(2 * a), 0.5 * np.sin(2 * a), 0 * a])
    L = SampledLink((line, circ))
    assert L.closures == ("antipodal_arc", "loop")
