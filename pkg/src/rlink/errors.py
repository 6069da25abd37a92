"""Exception hierarchy shared by all rlink modules."""


class RlinkError(Exception):
    """Base class for every error raised by rlink."""


# algebra
class ZeroPolynomial(RlinkError):
    pass


class NoConvergence(RlinkError):
    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


# curves
class DegenerateCurve(RlinkError):
    pass


class CurvatureVanishes(RlinkError):
    def __init__(self, message, parameters=()):
        super().__init__(message)
        self.parameters = tuple(parameters)


class PlaneContainsCurve(RlinkError):
    pass


# projection
class DegreeDrop(RlinkError):
    pass


class CenterOnCurve(DegreeDrop):
    pass


class NonGenericCenter(RlinkError):
    pass


class DegenerateGaussMap(RlinkError):
    pass


# linking
class SamplingTooCoarse(RlinkError):
    pass


class CurvesIntersect(RlinkError):
    pass


class RoundingUnsafe(RlinkError):
    def __init__(self, message, raw=None):
        super().__init__(message)
        self.raw = raw


class FramingDegenerate(RlinkError):
    pass


class UnstableEps(RlinkError):
    pass


# invariants
class SignRuleUnverified(RlinkError):
    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class BoundViolated(RlinkError):
    pass


class InconsistentTightness(BoundViolated):
    """|osc| is maximal but a necessary condition for tightness fails."""


class NoValidSamples(RlinkError):
    pass


class InputError(RlinkError):
    """Malformed curve/family file."""
