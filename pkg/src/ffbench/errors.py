"""Exception hierarchy shared by every ffbench module."""


class FFBenchError(Exception):
    """Base class for all errors raised by ffbench."""


class EmptyInput(FFBenchError, ValueError):
    pass


class BadOrder(FFBenchError, ValueError):
    pass


class DegenerateTarget(FFBenchError, ValueError):
    pass


class BudgetExceeded(FFBenchError):
    pass


class InvalidCap(FFBenchError, ValueError):
    pass


class NonIntegral(FFBenchError, ValueError):
    pass


class Unembeddable(FFBenchError, ValueError):
    pass


class NotStopped(FFBenchError, ValueError):
    pass


class Stalled(FFBenchError):
    def __init__(self, message, theta=None, steps=()):
        super().__init__(message)
        self.theta = theta
        self.steps = tuple(steps)


class DiscriminantZero(FFBenchError, ArithmeticError):
    pass


class ComplexRoots(FFBenchError, ArithmeticError):
    pass


class OutOfDomain(FFBenchError, ValueError):
    pass


class MissingParent(FFBenchError, ValueError):
    pass


class Inconsistent(FFBenchError, AssertionError):
    """Raised when a computation contradicts a proven statement."""


class ParseError(FFBenchError, ValueError):
    pass
