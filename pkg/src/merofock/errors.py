"""Error types shared across the package."""


class MerofockError(Exception):
    """Base class for all package-specific errors."""


class DivisionByZero(MerofockError):
    """Division by an exactly-zero field element."""


class PrecisionLoss(MerofockError):
    """A truncated-series operation was asked for an empty window."""


class PoleAtPoint(MerofockError):
    """Evaluation or Taylor expansion requested at a pole."""

    def __init__(self, point):
        self.point = point
        super().__init__(f"pole at point {point}")


class ZeroConstantTerm(MerofockError):
    """Logarithmic coordinates need a nonzero constant jet term."""


class DomainViolation(MerofockError):
    """A partial operator was applied outside its domain.

    The support of the argument met a zero or pole of the twist.
    """

    def __init__(self, point):
        self.point = point
        super().__init__(f"operator undefined: support meets twist zero/pole at {point}")


class NotExtractable(MerofockError):
    """A fusion coefficient does not assemble into a single operator."""


class NotInFockSubring(MerofockError):
    """Localization input lies outside the subring generated at 0."""


class WindowTooSmall(MerofockError):
    """A requested coefficient falls outside the computable window."""


class ExprSyntaxError(MerofockError):
    """Parse failure, with 1-based column of the offending character."""

    def __init__(self, message, column):
        self.column = column
        super().__init__(f"{message} at column {column}")


class UnknownSuite(MerofockError):
    """The verification suite name is not recognized."""


class BadConfig(MerofockError):
    """Suite or CLI configuration is malformed."""
