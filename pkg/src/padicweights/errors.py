"""Exception hierarchy shared by all modules."""


class PadicError(Exception):
    pass


class NotAUnit(PadicError, ValueError):
    pass


class Divergent(PadicError, ValueError):
    pass


class InsufficientPrecision(PadicError, ValueError):
    pass


class ConductorMismatch(PadicError, ValueError):
    pass


class LevelTooLow(PadicError, ValueError):
    pass


class Pole(PadicError, ZeroDivisionError):
    pass


class NearPole(PadicError, ValueError):
    pass


class RegimeMismatch(PadicError, ValueError):
    pass


class SingularArgument(PadicError, ValueError):
    pass
