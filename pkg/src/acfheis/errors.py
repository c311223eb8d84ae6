"""Exception hierarchy shared by every module."""


class ACFError(Exception):
    """Base class for all errors raised by acfheis."""


class InvalidArgument(ACFError, ValueError):
    pass


class UnsupportedDimension(InvalidArgument):
    pass


class DegenerateField(ACFError, ValueError):
    """A quotient or ratio would divide by a (numerically) vanishing integral."""


class Pole(ACFError, ValueError):
    """Evaluation requested at the pole of a singular function (the origin)."""


class CharacteristicAxis(ACFError, ValueError):
    """The point lies on the t-axis, where the polar horizontal frame degenerates."""


class SolverFailure(ACFError, RuntimeError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
