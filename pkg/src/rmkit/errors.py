"""Exception hierarchy shared by every module."""


class RMKitError(Exception):
    """Base class for domain errors raised by rmkit."""


class RationalValue(RMKitError, ValueError):
    """An operation produced (or was given) a rational number."""


class DivisionByZero(RMKitError, ZeroDivisionError):
    pass


class DegenerateMatrix(RMKitError, ValueError):
    pass


class NonCanonicalRadicand(RMKitError, ValueError):
    pass


class NotUnimodular(RMKitError, ValueError):
    pass


class NotHyperbolic(RMKitError, ValueError):
    pass


class FixedPointAtInfinity(RMKitError, ValueError):
    pass


class BoundExceeded(RMKitError, ValueError):
    pass


class NotIntegral(RMKitError, ValueError):
    pass


class ParseError(RMKitError, ValueError):
    pass
