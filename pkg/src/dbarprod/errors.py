"""Exception types raised by the solver stack."""


class DbarError(ValueError):
    """Base class for all domain errors raised by this package."""


class PointOnOrOutsideBoundary(DbarError):
    pass


class PointAtPuncture(DbarError):
    pass


class OutOfDomain(DbarError):
    pass


class LaurentPole(DbarError, ZeroDivisionError):
    pass


class SymbolicRequired(DbarError):
    pass


class MissingDerivativeData(DbarError):
    pass


class NotClosed(DbarError):
    pass


class DivergentWeight(DbarError):
    pass


class DivergentIntegral(DbarError):
    """A monomial is not locally integrable against the Cauchy kernel."""


class GridTooCloseToBoundary(DbarError):
    pass
