"""Exception types raised across the package."""


class QovoidError(Exception):
    pass


class NotPrime(QovoidError, ValueError):
    pass


class EvenCharacteristic(QovoidError, ValueError):
    pass


class DivisionByZero(QovoidError, ZeroDivisionError):
    pass


class ZeroVector(QovoidError, ValueError):
    pass


class NotCollinear(QovoidError, ValueError):
    pass


class UnexpectedOrbitLength(QovoidError, RuntimeError):
    pass


class CensusMismatch(QovoidError, RuntimeError):
    pass


class PredicateInapplicable(QovoidError, ValueError):
    pass


class UnsupportedQ(QovoidError, ValueError):
    pass


class NoSolution(QovoidError, ValueError):
    pass


class NoAnchor(QovoidError, RuntimeError):
    pass
