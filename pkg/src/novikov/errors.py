"""Exception types raised across the package."""


class NovikovError(Exception):
    pass


class ContextMismatch(NovikovError, ValueError):
    """Operands live over different groups, characters or values of d."""


class NotAUnitForm(NovikovError, ValueError):
    """Element is not of the recognizable shape +-g(1-a) with ||a|| < 1."""


class NormNotContracting(NovikovError, ValueError):
    pass


class PivotNotUnit(NovikovError, ValueError):
    pass


class CutoffTooCoarse(NovikovError, ValueError):
    pass


class NormEscape(NovikovError):
    pass


class BlockNotInvertible(NovikovError, ValueError):
    pass


class WitnessInvalid(NovikovError, ValueError):
    pass


class NoiseBreaksComplex(NovikovError):
    pass


class InverseCheckFailed(NovikovError):
    pass


class DocumentError(NovikovError, ValueError):
    """Malformed complex document; ``where`` locates the offending field."""

    def __init__(self, message, where=None):
        self.where = where
        if where:
            message = f"{where}: {message}"
        super().__init__(message)


class ComplexInvalid(DocumentError):
    """Document parses but d^2 != 0; ``failures`` lists (degree, row, col)."""

    def __init__(self, failures, where="complex.boundaries"):
        self.failures = list(failures)
        shown = ", ".join(str(f) for f in self.failures[:5])
        super().__init__(f"d^2 != 0 at (degree, row, col) {shown}", where)
