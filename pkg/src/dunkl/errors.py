"""Exception hierarchy. Every numerical failure surfaces as one of these."""


class DunklError(Exception):
    """Base class for all package errors."""


class NonPositiveLambda(DunklError, ValueError):
    pass


class BadResolution(DunklError, ValueError):
    pass


class ArgumentTooLarge(DunklError, ValueError):
    pass


class AsymmetricGrid(DunklError, ValueError):
    pass


class BoundaryPoint(DunklError, ValueError):
    pass


class TruncationTooTight(DunklError, RuntimeError):
    pass


class ZeroFunction(DunklError, ValueError):
    pass


class DegenerateArguments(DunklError, ValueError):
    pass


class InterpolationOutOfRange(DunklError, ValueError):
    pass


class NonPositiveY(DunklError, ValueError):
    pass


class EmptyCone(DunklError, ValueError):
    pass


class DiagonalPoint(DunklError, ValueError):
    pass


class NonConvergentPV(DunklError, RuntimeError):
    pass


class NonConvergentBoundary(DunklError, RuntimeError):
    pass


class InfeasibleAtom(DunklError, ValueError):
    pass


class QuadratureUnstable(DunklError, RuntimeError):
    pass


class PreconditionViolated(DunklError, ValueError):
    pass


class InsideExcludedRegion(DunklError, ValueError):
    pass


class InvalidConfig(DunklError, ValueError):
    pass


class SuiteFailure(DunklError, RuntimeError):
    def __init__(self, message, cases=()):
        super().__init__(message)
        self.cases = list(cases)


class IoFailure(DunklError, OSError):
    pass
