"""Exception hierarchy.

Every geometric or precondition failure derives from :class:`GeometryError`
so that callers (and the CLI) can separate them from I/O problems.
"""


class GeometryError(ValueError):
    """Base class for geometric / precondition failures."""


class FrameDegenerate(GeometryError):
    """A Frenet frame cannot be formed (geodesic point, rank deficiency)."""

    def __init__(self, message, measured=None):
        super().__init__(message)
        self.measured = measured


class RadiusMismatch(GeometryError):
    pass


class NotImmersed(GeometryError):
    pass


class IntegrationFailure(GeometryError):
    pass


class PlaneCurveNotAllowed(GeometryError):
    pass


class DegenerateAngle(GeometryError):
    pass


class TangentPole(GeometryError):
    pass


class NotAdmissible(GeometryError):
    pass


class SignMismatch(GeometryError):
    pass


class DomainError(GeometryError):
    pass


class EmptyInput(GeometryError):
    pass


class PoleOnCurve(GeometryError):
    pass
