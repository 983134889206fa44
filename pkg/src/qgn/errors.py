"""Exception hierarchy shared by the library and the CLI."""


class QGNError(Exception):
    """Base class for all errors raised by this package."""


class QDomainError(QGNError, ValueError):
    """An argument lies outside an operator's domain (bad q, index, degree)."""


class NumericalFailure(QGNError, ArithmeticError):
    """A residual, derivative or objective evaluated to a non-finite value."""


class InvalidPointError(QGNError, ValueError):
    """A point was rejected by a problem's domain guard."""


class SingularSystemError(QGNError, ArithmeticError):
    """The Jacobian is numerically rank deficient."""

    def __init__(self, message: str, rank: int, ncols: int):
        super().__init__(message)
        self.rank = rank
        self.ncols = ncols


class ExprError(QGNError, ValueError):
    """Base class for expression parsing errors; ``offset`` is a byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()):
        if expected:
            message = f"{message}; expected one of: {', '.join(sorted(expected))}"
        super().__init__(message, offset)
        self.expected = expected


class UnknownIdentifierError(ExprError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier {name!r}", offset)
        self.name = name


class VariableIndexError(ExprError):
    def __init__(self, name: str, n: int, offset: int):
        super().__init__(f"variable {name!r} out of range for n={n}", offset)
        self.name = name
        self.n = n
