"""Exception hierarchy.

Every error derives from :class:`NilscrollError`. The CLI maps
``ValidationError`` subclasses to exit code 2 and ``DomainError``
subclasses to exit code 3.
"""


class NilscrollError(Exception):
    pass


class ValidationError(NilscrollError, ValueError):
    """Bad or inconsistent input."""


class DomainError(NilscrollError, ArithmeticError):
    """Input is well formed but the geometry is degenerate there."""


# algebra
class NoRoot(DomainError):
    pass


class NotInvertible(DomainError):
    pass


class OutOfGrid(DomainError):
    pass


# frames and curves
class BadInitialFrame(ValidationError):
    pass


class BadFrame(ValidationError):
    pass


class NotNull(ValidationError):
    pass


class ZeroRuling(ValidationError):
    pass


class MixedBeta(ValidationError):
    pass


# surfaces
class DegeneratePoint(DomainError):
    pass


class DegenerateMetric(DomainError):
    pass


class ChartInvalid(DomainError):
    pass


class NotClosed(DomainError):
    pass


class NotLorentz(ValidationError):
    pass


# constructors
class ZeroC3(ValidationError):
    pass


class AlphaVanishes(ValidationError):
    pass


class BetaNotHalf(ValidationError):
    pass


class BetaZero(ValidationError):
    pass


class ZeroB3(ValidationError):
    pass


class UnknownName(ValidationError):
    pass


class TooFewPoints(ValidationError):
    pass
