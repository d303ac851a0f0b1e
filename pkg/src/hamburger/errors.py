"""Exception hierarchy shared by every module of the package."""


class HamburgerError(Exception):
    """Base class for all errors raised by :mod:`hamburger`."""


class TruncationError(HamburgerError, ValueError):
    """A requested index range exceeds the stored truncation of a series."""


class DivisionUndefinedError(HamburgerError, ZeroDivisionError):
    """The leading coefficient of a divisor series vanishes."""


class InsufficientDataError(HamburgerError, ValueError):
    pass


class InsufficientSamplesError(HamburgerError, ValueError):
    pass


class PoleError(HamburgerError, ValueError):
    """Evaluation requested at a pole."""


class PrecisionError(HamburgerError, ArithmeticError):
    """A documented remainder bound cannot be met at double precision."""


class IllConditionedError(HamburgerError, ArithmeticError):
    pass


class NotALaplaceTransformError(HamburgerError, ValueError):
    """A rational function with a non-constant polynomial part."""


class BoundaryTooCloseError(HamburgerError, ArithmeticError):
    """A contour passes too close to a zero for the phase to be tracked."""


class ImprimitiveCharacterError(HamburgerError, ValueError):
    pass


class UnsupportedError(HamburgerError, ValueError):
    pass


class SelectorError(HamburgerError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""
