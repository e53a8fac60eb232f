"""Exception hierarchy shared by every module of the package."""


class FdeError(Exception):
    """Base class for all package errors."""


class DomainError(FdeError, ValueError):
    pass


class ArgumentTooLargeError(FdeError, ValueError):
    pass


class ConvergenceError(FdeError, ArithmeticError):
    pass


class NotRealError(FdeError, ValueError):
    pass


class AlphaMismatchError(FdeError, ValueError):
    pass


class NotARootError(FdeError, ValueError):
    pass


class DegenerateOperatorError(FdeError, ArithmeticError):
    pass


class ResidualError(FdeError, ArithmeticError):
    """A solution failed its own residual check (internal inconsistency)."""


class StepUnderflowError(FdeError, ValueError):
    pass


class ValidationError(FdeError, ValueError):
    pass


class ParseError(FdeError, ValueError):
    """Syntax error in a problem description.

    Carries the 1-based ``line`` and ``column`` of the offending token and the
    set of token kinds the parser would have accepted there.
    """

    def __init__(self, message, line=1, column=1, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        where = f"line {line}, column {column}"
        if self.expected:
            message = f"{message} (expected one of: {', '.join(self.expected)})"
        super().__init__(f"{where}: {message}")
