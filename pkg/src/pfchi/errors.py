"""Exception types shared across the package."""


class PfchiError(Exception):
    """Base class for all package errors."""


class NotPrime(PfchiError, ValueError):
    pass


class TooLarge(PfchiError):
    """An enumeration or field size exceeded the configured bound."""


class SortNotInTower(PfchiError, ValueError):
    pass


class FormulaSyntaxError(PfchiError, SyntaxError):
    """Parse failure; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text_src = text
        super().__init__(f"{message} at position {pos}")


class SortError(PfchiError, TypeError):
    pass


class UnboundVariable(PfchiError, NameError):
    pass


class SingularCurve(PfchiError, ValueError):
    pass


class InconsistentCounts(PfchiError, ValueError):
    pass


class NoRecurrence(PfchiError, ValueError):
    pass


class ValidationFailure(PfchiError, ValueError):
    pass


class ZeroPolynomial(PfchiError, ValueError):
    pass


class StabilizationFailure(PfchiError, ArithmeticError):
    pass


class NonUnitRoot(PfchiError, ValueError):
    pass


class PreconditionViolated(PfchiError, ValueError):
    pass


class Supersingular(PfchiError, ValueError):
    pass


class SingularSystem(PfchiError, ArithmeticError):
    pass


class NotRepresentable(PfchiError, ValueError):
    pass
