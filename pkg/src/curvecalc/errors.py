"""Exception and warning types shared across the package."""


class CurveCalcError(Exception):
    """Base class for all library errors."""


class SelfIntersection(CurveCalcError):
    """Polyline crosses itself."""


class DegenerateSegment(CurveCalcError):
    """Two consecutive vertices coincide."""


class ZeroDirection(CurveCalcError):
    """A direction vector is zero."""


class AmbiguousProjection(CurveCalcError):
    """Nearest-segment projection is not unique for the query point."""


class OnCurve(CurveCalcError):
    """Evaluation point lies on the carrier."""


class EndpointParameter(CurveCalcError):
    """Parameter must be interior to the curve."""


class NegativeWeight(CurveCalcError):
    """Straightening weights must be nonnegative."""


class DisconnectedWithoutChoice(CurveCalcError):
    """Reduction requires a connected carrier or a choice function spanning it."""


class PoleOnCarrier(CurveCalcError):
    """A Moebius map sends a carrier point to infinity."""


class BaseOffCarrier(CurveCalcError):
    """Reduction base point does not lie on the carrier."""


class AlphaOutOfRange(CurveCalcError):
    """Power exponent outside |Re alpha| < 1."""


class ZInside(CurveCalcError):
    """Evaluation point lies inside the closed contour."""


class SupportTouchesBoundary(CurveCalcError):
    """Interior measure support too close to the boundary curve."""


class NotInDomain(CurveCalcError):
    """Vector is not in the domain of the relation."""


class MultiValued(CurveCalcError):
    """Relation is multivalued on the requested fiber."""


class SectorViolation(CurveCalcError):
    """Approach direction lies in a forbidden sector of curve directions."""


class NonHoelderDensity(CurveCalcError):
    """Boundary-value extrapolation needs a Hoelder-continuous density."""


class GrowthViolation(CurveCalcError):
    """Weighted resolvent growth bound exceeded."""


class ResolventFailure(CurveCalcError):
    """A quadrature node's resolvent does not apply to the running vector."""

    def __init__(self, node, message=""):
        self.node = node
        super().__init__(message or f"resolvent failed at node {node}")


class DefectiveMatrix(CurveCalcError):
    """Eigenvector condition number too large for the oracle."""


class HypothesisViolated(CurveCalcError):
    """A randomly generated configuration failed the lemma's preconditions."""


class QuadratureWarning(UserWarning):
    """Adaptive refinement hit the depth cap; the returned value is a best estimate."""
