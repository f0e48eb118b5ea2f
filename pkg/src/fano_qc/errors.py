"""Exception hierarchy shared across the package."""

from __future__ import annotations


class FanoQCError(Exception):
    """Base class for all errors raised by fano_qc."""


class ParseError(FanoQCError, ValueError):
    pass


class ZeroPolynomialError(FanoQCError, ValueError):
    """The weighted degree of the zero polynomial is undefined."""


class InhomogeneousError(FanoQCError, ValueError):
    """Raised when a polynomial mixes weighted degrees.

    ``monomials`` maps each offending ``(q_exp, h_exp)`` pair to its degree.
    """

    def __init__(self, monomials: dict[tuple[int, int], int]):
        self.monomials = dict(monomials)
        parts = ", ".join(f"q^{a}h^{b} (deg {d})" for (a, b), d in sorted(self.monomials.items()))
        super().__init__(f"inhomogeneous polynomial: {parts}")


class LengthMismatch(FanoQCError, ValueError):
    pass


class DimMismatch(FanoQCError, ValueError):
    pass


class NotUnipotent(FanoQCError, ValueError):
    pass


class InvalidParams(FanoQCError, ValueError):
    pass


class NotAdapted(FanoQCError, ValueError):
    """Raised by the reduction when a family violates the adapted conditions."""

    def __init__(self, report):
        self.report = report
        super().__init__(f"family is not adapted: {report}")


class BandViolation(FanoQCError, ArithmeticError):
    pass


class MalformedConnection(FanoQCError, ValueError):
    pass
