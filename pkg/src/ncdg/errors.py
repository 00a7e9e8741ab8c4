"""Exception hierarchy.  Every error raised on purpose derives from NCDGError."""

from __future__ import annotations


class NCDGError(Exception):
    """Base class for all ncdg errors."""


class ParseError(NCDGError):
    def __init__(self, message: str, where: str | None = None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


class InvalidAlgebra(NCDGError):
    """Structure data violates an algebra axiom; ``indices`` names the witness."""

    def __init__(self, message: str, indices: tuple = ()):
        self.indices = tuple(indices)
        super().__init__(message)


class NotAssociative(InvalidAlgebra):
    pass


class NoUnit(InvalidAlgebra):
    pass


class BadInvolution(InvalidAlgebra):
    pass


class AlgebraMismatch(NCDGError):
    pass


class Inconsistent(NCDGError):
    """A linear system has no solution."""


class NotInSubspace(NCDGError):
    pass


class UnsupportedDegree(NCDGError):
    pass


class NotADerivation(NCDGError):
    pass


class DegreeZero(NCDGError):
    pass


class Degenerate(NCDGError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class NonUnique(NCDGError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class NotSymplectic(NCDGError):
    pass


class Unsupported(NCDGError):
    pass


class CenterNotTrivial(Unsupported):
    pass


class OuterDerivationsExist(Unsupported):
    pass


class NotCentral(NCDGError):
    pass


class NotNormalized(NCDGError):
    pass


class InvalidModule(NCDGError):
    pass


class InvalidConnection(NCDGError):
    pass


class KindMismatch(NCDGError):
    pass


class QuotientNotPreserved(AssertionError):
    """Tensor-product connection failed to preserve the balancing relations."""


class NoInvolution(NCDGError):
    pass


class WrongModule(NCDGError):
    pass


class HbarDivisionFailure(AssertionError):
    """A commutator in the Weyl algebra was not divisible by hbar."""


class DegreeExceeded(NCDGError):
    pass


class UnknownSuite(NCDGError):
    pass
