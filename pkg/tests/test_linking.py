import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rlink import catalog
from rlink.algebra import DEFAULT_CONFIG
from rlink.curves import SampledLink
from rlink.errors import CurvesIntersect, RoundingUnsafe
from rlink.linking import (Blackboard, HalfInt, blackboard_from_diagram,
                           gauss_linking_r3, lk, lk_raw, push_off, self_linking,
                           self_linking_detail)
from rlink.projection import build_diagram, generic_diagrams


def _circle(center, u, v, r=1.0, n=400):
    a = np.linspace(0, 2 * np.pi, n, endpoint=False)[:, None]
    return np.asarray(center) + r * (np.cos(a) * np.asarray(u) + np.sin(a) * np.asarray(v))


def _midpoint_gauss(A, B):
    # plain double sum of the Gauss integrand, as a slow oracle
    dA = np.roll(A, -1, axis=0) - A
    dB = np.roll(B, -1, axis=0) - B
    mA = A + 0.5 * dA
    mB = B + 0.5 * dB
    r = mA[:, None, :] - mB[None, :, :]
    cr = np.cross(dA[:, None, :], dB[None, :, :])
    return np.sum(np.einsum("ijk,ijk->ij", r, cr) / np.linalg.norm(r, axis=2) ** 3) / (4 * np.pi)


# half-integers

def test_halfint_arithmetic():
    a, b = HalfInt(3), HalfInt(-1)
    assert str(a) == "3/2" and str(b) == "-1/2" and str(HalfInt(4)) == "2"
    assert a + b == 1
    assert a - b == 2
    assert abs(b) == HalfInt(1)
    assert -a < b


def test_halfint_rounding():
    assert HalfInt.from_float(1.49) == HalfInt(3)
    with pytest.raises(RoundingUnsafe):
        HalfInt.from_float(1.25)


@given(st.integers(-200, 200))
def test_halfint_round_trip(k):
    assert HalfInt.from_float(k / 2 + 0.01).twice_value == k


# Gauss integral in R^3

def test_gauss_kernel_against_midpoint_rule():
    A = _circle([0, 0, 0], [1, 0, 0], [0, 1, 0])
    B = _circle([1, 0, 0], [1, 0, 0], [0, 0, 1], n=300)
    exact = gauss_linking_r3(A, B)
    assert exact == pytest.approx(_midpoint_gauss(A, B), abs=1e-3)
    assert abs(exact) == pytest.approx(1.0, abs=1e-9)
    C = _circle([5, 0, 0], [1, 0, 0], [0, 1, 0])
    assert gauss_linking_r3(A, C) == pytest.approx(0.0, abs=1e-9)


def test_gauss_kernel_reversal():
    A = _circle([0, 0, 0], [1, 0, 0], [0, 1, 0])
    B = _circle([1, 0, 0], [1, 0, 0], [0, 0, 1])
    assert gauss_linking_r3(A[::-1], B) == pytest.approx(-gauss_linking_r3(A, B))


# linking in RP^3

def _two_lines():
    return catalog.line([1, 0, 0, 0], [0, 1, 0, 0]), catalog.line([0, 0, 1, 0], [0, 0, 0, 1])


def test_two_lines_link_half():
    A, B = _two_lines()
    v = lk(A, B)
    assert abs(v) == HalfInt(1)
    assert lk(B, A) == v
    assert lk(A.reversed(), B) == -v


def test_split_unknots():
    A = catalog.round_circle([0, 0, 0], 0.5)
    B = catalog.round_circle([4, 0, 0], 0.5)
    assert lk(A, B) == 0


def test_round_circles_hopf():
    A = catalog.round_circle([0, 0, 0], 1.0)
    B = catalog.round_circle([1, 0, 0], 1.0, axes=((1, 0, 0), (0, 0, 1)))
    assert abs(lk(A, B)) == 1


def test_axis_through_circle():
    z_axis = catalog.line([1, 0, 0, 0], [0, 0, 0, 1])
    assert abs(lk(z_axis, catalog.round_circle([0, 0, 0], 1.0))) == 1
    assert lk(z_axis, catalog.round_circle([3, 0, 0], 1.0)) == 0


def test_intersecting_curves_raise():
    A = catalog.line([1, 0, 0, 0], [0, 1, 0, 0])
    B = catalog.line([1, 0, 0, 0], [0, 0, 1, 0])
    with pytest.raises(CurvesIntersect):
        lk_raw(A, B)


def test_sampled_link_input_matches_curve():
    A, B = _two_lines()
    a = np.linspace(0, np.pi, 800, endpoint=False)
    SA = SampledLink((np.column_stack([np.cos(a), np.sin(a), 0 * a, 0 * a]),))
    assert lk(SA, B) == lk(A, B)


# self-linking

def test_twisted_cubic_osc():
    X = catalog.twisted_cubic()
    assert self_linking(X) == HalfInt(3)
    assert self_linking(X.mirrored()) == HalfInt(-3)
    assert self_linking(X.reversed()) == HalfInt(3)


@pytest.mark.parametrize("d,expected", [(4, 8), (5, 15)])
def test_hyperboloid_curves_reach_bound(d, expected):
    assert abs(self_linking(catalog.hyperboloid_curve(d))) == HalfInt(expected)


def test_raw_value_near_half_integer():
    det = self_linking_detail(catalog.mixed_sign_quartic())
    assert abs(det.raw - det.value.value) < 0.05
    assert abs(det.raw - det.raw_half_eps) < 1e-3


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_osc_invariant_under_projective_maps(seed):
    rng = np.random.default_rng(seed)
    X = catalog.random_smooth_curve(3 + seed % 2, rng)
    A = np.eye(4) + 0.3 * rng.standard_normal((4, 4))
    s = int(np.sign(np.linalg.det(A)))
    assert self_linking(X.transformed(A)).twice_value == s * self_linking(X).twice_value


def test_blackboard_matches_diagram():
    rng = np.random.default_rng(2)
    X = catalog.random_smooth_curve(4, rng)
    for D in generic_diagrams(X, 3, DEFAULT_CONFIG, rng):
        assert self_linking(X, Blackboard(D.center)) == blackboard_from_diagram(D)


def test_push_off_links_like_self_linking():
    X = catalog.twisted_cubic()
    # osculating ribbon is an annulus here
    assert lk(X, push_off(X, eps=0.05)) == self_linking(X)
    # crunodal center: the blackboard ribbon is a Moebius band, the push-off covers twice
    p = X.point(-0.7) + 1.3 * X.point(0.9)
    D = build_diagram(X, p)
    b = self_linking(X, Blackboard(D.center))
    assert b == blackboard_from_diagram(D) == 1
    assert lk(X, push_off(X, Blackboard(D.center), eps=0.05)).twice_value == 2 * b.twice_value
