"""Exception hierarchy.

Every domain error derives from :class:`ReflRigidError`, which is also a
``ValueError`` so callers that only care about bad input can catch that.
"""


class ReflRigidError(ValueError):
    """Base class for all domain errors raised by this package."""


class NotTransverse(ReflRigidError):
    pass


class NotInvertible(ReflRigidError):
    pass


class ZeroMatrix(ReflRigidError):
    pass


class DimensionMismatch(ReflRigidError):
    pass


class NotHyperbolic(ReflRigidError):
    pass


class ConstructionFailed(ReflRigidError):
    pass


class NotLagrangian(ReflRigidError):
    pass


class NotSymmetric(ReflRigidError):
    pass


class SignatureMismatch(ReflRigidError):
    pass


class Singular(ReflRigidError):
    pass


class DegenerateCoefficients(ReflRigidError):
    pass


class NonRealRoots(ReflRigidError):
    pass


class NoConvergence(ReflRigidError):
    """Raised when the relation-variety projection misses its tolerance.

    The best iterate is kept on the exception for diagnostics.
    """

    def __init__(self, message, rep=None, residual=float("nan"), nfev=0):
        super().__init__(message)
        self.rep = rep
        self.residual = residual
        self.nfev = nfev
