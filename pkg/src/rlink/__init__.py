"""Invariants of real rational links in projective three-space."""

__version__ = "0.1.0"

from .algebra import DEFAULT_CONFIG, Poly, ToleranceConfig, find_roots, resultant
from .curves import ParamPlaneCurve, ParamSpaceCurve, SampledLink, validate_smooth_link
from .errors import (BoundViolated, CenterOnCurve, CurvatureVanishes, CurvesIntersect,
                     DegenerateCurve, DegenerateGaussMap, DegreeDrop, FramingDegenerate,
                     InconsistentTightness, InputError, NoConvergence, NonGenericCenter,
                     NoValidSamples, PlaneContainsCurve, RlinkError, RoundingUnsafe,
                     SamplingTooCoarse, SignRuleUnverified, UnstableEps, ZeroPolynomial)
from .invariants import (FamilySpec, WallEvent, WallKind, encomplexed_writhe, family_scan,
                         tightness_check, writhe_bound)
from .linking import OSCULATING, Blackboard, HalfInt, Osculating, lk, push_off, self_linking
from .projection import ProjectionCenter, build_diagram, klein_check, plane_diagram, project

__all__ = [
    "DEFAULT_CONFIG", "Poly", "ToleranceConfig", "find_roots", "resultant",
    "ParamPlaneCurve", "ParamSpaceCurve", "SampledLink", "validate_smooth_link",
    "BoundViolated", "CenterOnCurve", "CurvatureVanishes", "CurvesIntersect", "DegenerateCurve",
    "DegenerateGaussMap", "DegreeDrop", "FramingDegenerate", "InconsistentTightness",
    "InputError", "NoConvergence", "NonGenericCenter", "NoValidSamples", "PlaneContainsCurve",
    "RlinkError", "RoundingUnsafe", "SamplingTooCoarse", "SignRuleUnverified", "UnstableEps",
    "ZeroPolynomial",
    "FamilySpec", "WallEvent", "WallKind", "encomplexed_writhe", "family_scan",
    "tightness_check", "writhe_bound",
    "OSCULATING", "Blackboard", "HalfInt", "Osculating", "lk", "push_off", "self_linking",
    "ProjectionCenter", "build_diagram", "klein_check", "plane_diagram", "project",
]
