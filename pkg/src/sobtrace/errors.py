"""Exception types raised across the package."""


class SobtraceError(Exception):
    """Base class for all package errors."""


class DegenerateNodes(SobtraceError, ValueError):
    pass


class UnsupportedOrder(SobtraceError, ValueError):
    pass


class BadInterval(SobtraceError, ValueError):
    pass


class BadOrder(SobtraceError, ValueError):
    pass


class QuadratureFailure(SobtraceError, ArithmeticError):
    def __init__(self, message, best_estimate):
        super().__init__(message)
        self.best_estimate = best_estimate


class Exhausted(SobtraceError, ValueError):
    pass


class TooFewPoints(SobtraceError, ValueError):
    pass


class InstanceTooLarge(SobtraceError, ValueError):
    pass


class NotApplicable(SobtraceError, ValueError):
    pass


class ZeroTailViolation(SobtraceError, RuntimeError):
    pass


class NonCompactSupport(SobtraceError, ValueError):
    pass


class BadSubsequence(SobtraceError, ValueError):
    pass


class BadSimplex(SobtraceError, ValueError):
    pass


class WindowTooSmall(SobtraceError, ValueError):
    pass


class BadSampleSet(SobtraceError, ValueError):
    pass
