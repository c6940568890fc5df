"""Exception hierarchy.

Every error carries a stable ``kind`` string and the process exit code the
CLI uses for it.
"""


class PadicHenonError(Exception):
    kind = "Error"
    exit_code = 1


class ParseError(PadicHenonError, ValueError):
    kind = "ParseError"
    exit_code = 2

    def __init__(self, message, text=None, position=None):
        super().__init__(message)
        self.text = text
        self.position = position


class WrongRegion(PadicHenonError, ValueError):
    kind = "WrongRegion"
    exit_code = 3


class NotSquare(PadicHenonError, ValueError):
    kind = "NotSquare"
    exit_code = 4


class PrecisionExhausted(PadicHenonError, ArithmeticError):
    kind = "PrecisionExhausted"
    exit_code = 5


class BudgetExceeded(PadicHenonError, RuntimeError):
    kind = "BudgetExceeded"
    exit_code = 6


class NonConvergence(PadicHenonError, RuntimeError):
    kind = "NonConvergence"
    exit_code = 7


class DivisionByZero(PadicHenonError, ZeroDivisionError):
    kind = "DivisionByZero"
    exit_code = 8


class NotIntegral(PadicHenonError, ValueError):
    kind = "NotIntegral"
    exit_code = 9


class BranchUnavailable(PadicHenonError, ValueError):
    kind = "BranchUnavailable"
    exit_code = 10


class NotInJulia(PadicHenonError, ValueError):
    kind = "NotInJulia"
    exit_code = 11


class AmbiguousSector(PadicHenonError, ValueError):
    kind = "AmbiguousSector"
    exit_code = 12


ALL_ERRORS = (
    ParseError,
    WrongRegion,
    NotSquare,
    PrecisionExhausted,
    BudgetExceeded,
    NonConvergence,
    DivisionByZero,
    NotIntegral,
    BranchUnavailable,
    NotInJulia,
    AmbiguousSector,
)
