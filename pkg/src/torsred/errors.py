class TorsredError(ValueError):
    """Base class for invalid input to any torsred operation."""

    kind = "invalid-input"


class UnsupportedPrimeError(TorsredError):
    kind = "unsupported-prime"


class SingularCurveError(TorsredError):
    kind = "singular-curve"


class NotOnCurveError(TorsredError):
    kind = "not-on-curve"


class ImpossibleTripleError(TorsredError):
    kind = "impossible-triple"


class ReducibleQuadraticError(TorsredError):
    """The defining quadratic of a family member has rational roots."""

    kind = "reducible-quadratic"

    def __init__(self, message: str, roots: tuple = ()):
        super().__init__(message)
        self.roots = roots
