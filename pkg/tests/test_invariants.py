from types import SimpleNamespace

import numpy as np
import pytest

from rlink import catalog
from rlink.algebra import DEFAULT_CONFIG
from rlink.errors import DegenerateCurve, SignRuleUnverified
from rlink.invariants import (FamilySpec, WallKind, chain_check, classify_wall,
                              elliptic_forcing_diagram, encomplexed_writhe, family_invariants,
                              murasugi_harnack_checks, pmap, tightness_check, writhe_bound,
                              writhe_from_diagrams)
from rlink.linking import HalfInt
from rlink.projection import generic_diagrams


def test_pmap_keeps_order():
    assert pmap(lambda x: x * x, range(6)) == [0, 1, 4, 9, 16, 25]


def test_twisted_cubic_writhe():
    w = encomplexed_writhe(catalog.twisted_cubic())
    assert w.independent and w.value == 1 == writhe_bound(catalog.twisted_cubic())


@pytest.mark.parametrize("d", [4, 5])
def test_hyperboloid_writhe_is_maximal(d):
    X = catalog.hyperboloid_curve(d)
    assert abs(encomplexed_writhe(X, n_centers=4).value) == writhe_bound(X)


def test_writhe_reverses_with_mirror_only():
    X = catalog.mixed_sign_quartic()
    w = encomplexed_writhe(X, n_centers=4).value
    assert encomplexed_writhe(X.mirrored(), n_centers=4).value == -w
    assert encomplexed_writhe(X.reversed(), n_centers=4).value == w


def test_writhe_disagreement_raises():
    fake = [SimpleNamespace(center=k, real_writhe=k, solitary_writhe=0) for k in (1, 2)]
    with pytest.raises(SignRuleUnverified) as exc:
        writhe_from_diagrams(fake)
    assert exc.value.result.totals == [1, 2]


def test_chain_on_twisted_cubic():
    X = catalog.twisted_cubic()
    D = generic_diagrams(X, 1, DEFAULT_CONFIG)[0]
    ch = chain_check(HalfInt(3), D)
    assert ch.holds
    assert ch.bound == HalfInt(3)


def test_tightness_twisted_cubic():
    t = tightness_check(catalog.twisted_cubic())
    assert t.tight and t.mw_verdict and t.torsion_positive and t.sign_constancy
    assert t.osc_value == HalfInt(3)


def test_tightness_needs_degree_three():
    with pytest.raises(DegenerateCurve):
        tightness_check(catalog.round_circle([0, 0, 0], 1.0))


def test_mixed_quartic_is_not_tight():
    t = tightness_check(catalog.mixed_sign_quartic(), n_centers=4)
    assert not t.tight
    assert all(c.holds for c in t.chains)


def test_node_bounds():
    X = catalog.hyperboloid_curve(4)
    diagrams = generic_diagrams(X, 3, DEFAULT_CONFIG)
    rep = murasugi_harnack_checks(X, diagrams, tight=True)
    assert rep.crossing_bound_ok
    assert rep.elliptic_bound_ok
    D = elliptic_forcing_diagram(X)
    assert D.census.e >= 1


@pytest.mark.parametrize("dw,dosc,kind", [
    (2, HalfInt(4), WallKind.First),
    (-2, HalfInt(-4), WallKind.First),
    (2, HalfInt(0), WallKind.Second),
    (0, HalfInt(2), WallKind.Third),
    (0, HalfInt(0), WallKind.Unknown),
    (1, HalfInt(0), WallKind.Unknown),
])
def test_classify_wall(dw, dosc, kind):
    assert classify_wall(dw, dosc) == kind


def test_family_evaluation():
    fam = catalog.real_crossing_family()
    assert np.allclose(fam.coeffs_at(0.0)[3], [0, 0, 0, 0, 1])
    assert family_invariants(fam, 0.0) is None          # self-intersection
    lo, hi = family_invariants(fam, -0.2), family_invariants(fam, 0.2)
    assert hi[0] - lo[0] == 2


def test_family_spec_validates_shape():
    with pytest.raises(ValueError):
        FamilySpec(np.zeros((3, 4, 2)), (0, 1))
    with pytest.raises(ValueError):
        FamilySpec(np.zeros((4, 4, 2)), (1, 0))
