"""Exception types raised across the package."""


class AppintError(Exception):
    """Base class for all package errors."""


class ZeroArgument(AppintError, ZeroDivisionError):
    """Evaluation at z=0 of a polynomial with negative exponents."""


class ZeroPolynomial(AppintError, ValueError):
    pass


class DegreeZero(AppintError, ValueError):
    pass


class DomainError(AppintError, ValueError):
    """A parameter lies outside the admissible domain (e.g. v <= -1)."""

    def __init__(self, msg, level=None):
        if level is not None:
            msg = f"level {level}: {msg}"
        super().__init__(msg)
        self.level = level


class PoleAtMinusOne(DomainError):
    pass


class SingularSystem(AppintError, ArithmeticError):
    pass


class CommonRoot(AppintError, ArithmeticError):
    """The symbol shares a root with its reflection a(-z)."""


class DuplicateNode(AppintError, ValueError):
    pass


class ResidualTooLarge(AppintError, ArithmeticError):
    pass


class CoprimalityFailure(AppintError):
    """Raised by the driver when a level's symbol is not coprime with its reflection.

    ``partial`` holds the sequence produced before the failing level.
    """

    def __init__(self, level, margin, partial=None):
        super().__init__(f"level {level}: symbol not coprime with its reflection (margin={margin:.3e})")
        self.level = level
        self.margin = margin
        self.partial = partial


class SelectionOutOfRange(AppintError, IndexError):
    def __init__(self, level, i, n):
        super().__init__(f"level {level}: selection i={i} outside 1..{n}")
        self.level = level


class BackendMismatch(AppintError, ArithmeticError):
    """Matrix and root solvers disagree beyond tolerance."""


class ParseError(AppintError, ValueError):
    pass


class ValidationError(AppintError, ValueError):
    pass
