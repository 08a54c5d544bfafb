"""Exception types raised across the package."""


class PushPullError(Exception):
    """Base class for all package errors."""


class InvalidArgument(PushPullError, ValueError):
    pass


class InfeasibleGraphError(PushPullError, ValueError):
    """Graph functional requested on a graph that is not strongly connected."""


class InvalidMatrixError(PushPullError, ValueError):
    """Matrix fails the stochasticity it is required to have."""


class CertificateViolation(PushPullError, ArithmeticError):
    """A contraction constant fell outside its admissible interval."""


class DivergenceError(PushPullError, FloatingPointError):
    """Non-finite iterate produced during a run.

    ``record`` holds the partial run record when the error escapes ``run``.
    """

    def __init__(self, message, iteration=None, agent=None, quantity=None, record=None):
        super().__init__(message)
        self.iteration = iteration
        self.agent = agent
        self.quantity = quantity
        self.record = record


class ConvergenceFailure(PushPullError, RuntimeError):
    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class SchemaError(PushPullError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ParseError(PushPullError, ValueError):
    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row
