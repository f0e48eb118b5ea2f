"""Differential operators in ``h∂`` with polynomial coefficients, and reduction.

An operator ``Σ c_j (h∂)^j`` is kept in normal form with every coefficient
written to the left.  Moving ``h∂`` past a coefficient uses
``(h∂)∘a = a(h∂) + h q da/dq`` (``∂ = d/dt = q d/dq``).

The reduction turns an adapted family ``Ω = (1/h) R dt`` into its scalar
reduced operator via ``P_0 = 1``, ``P_{β+1} = (h∂)P_β - Σ_{α≤β} r_{α,β} P_α``.
This route never touches the Birkhoff recursion, so it serves as the
independent oracle for the normalized connection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import TYPE_CHECKING, Sequence

from .banded import PolyMatrix, unipotent_inverse
from .errors import NotAdapted
from .exact_core import H, ONE, ZERO, QHPoly, Scalar, format_poly, is_homogeneous_of

if TYPE_CHECKING:
    from .picard_fuchs import AdaptedFamily


class DiffOperator:
    """``Σ_j coeffs[j] (h∂)^j`` with coefficients on the left."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[QHPoly | Scalar]):
        cs = [c if isinstance(c, QHPoly) else QHPoly.const(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs: tuple[QHPoly, ...] = tuple(cs)

    @classmethod
    def scalar(cls, c: QHPoly | Scalar) -> "DiffOperator":
        return cls([c])

    @property
    def order(self) -> int:
        """Order in ``h∂``; ``-1`` for the zero operator."""
        return len(self.coeffs) - 1

    def coeff(self, j: int) -> QHPoly:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else ZERO

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == ONE

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "DiffOperator") -> "DiffOperator":
        n = max(len(self.coeffs), len(other.coeffs))
        return DiffOperator([self.coeff(j) + other.coeff(j) for j in range(n)])

    def __neg__(self) -> "DiffOperator":
        return DiffOperator([-c for c in self.coeffs])

    def __sub__(self, other: "DiffOperator") -> "DiffOperator":
        return self + (-other)

    def lmul(self, a: QHPoly | Scalar) -> "DiffOperator":
        """Left multiplication by a coefficient function."""
        a = a if isinstance(a, QHPoly) else QHPoly.const(a)
        return DiffOperator([a * c for c in self.coeffs])

    def __mul__(self, other: "DiffOperator") -> "DiffOperator":
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return op_mul(self, other)

    def at_h1(self) -> "DiffOperator":
        return DiffOperator([c.at_h1() for c in self.coeffs])

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __str__(self) -> str:
        return format_operator(self)

    def __repr__(self) -> str:
        return f"DiffOperator({format_operator(self)!r})"


HD = DiffOperator([ZERO, ONE])


def op_mul(A: DiffOperator, B: DiffOperator) -> DiffOperator:
    """Normal-form product ``A∘B``.

    ``(h∂)^i ∘ b = Σ_r C(i,r) ((h∂)^r b) (h∂)^{i-r}`` by the Leibniz rule.
    """
    if A.is_zero() or B.is_zero():
        return DiffOperator([])
    out = [ZERO] * (A.order + B.order + 1)
    for j, b in enumerate(B.coeffs):
        if b.is_zero():
            continue
        derivs = [b]
        for _ in range(A.order):
            derivs.append(derivs[-1].theta() * H)
        for i, a in enumerate(A.coeffs):
            if a.is_zero():
                continue
            for r in range(i + 1):
                d = derivs[r]
                if d.is_zero():
                    break
                out[i - r + j] = out[i - r + j] + a * d * comb(i, r)
    return DiffOperator(out)


def hd_power(n: int) -> DiffOperator:
    return DiffOperator([ZERO] * n + [ONE])


def format_operator(P: DiffOperator) -> str:
    if P.is_zero():
        return "0"
    parts = []
    for j in range(P.order, -1, -1):
        c = P.coeffs[j]
        if c.is_zero():
            continue
        if j == 0:
            op = ""
        elif j == 1:
            op = "(h∂)"
        else:
            op = f"(h∂)^{j}"
        neg = False
        if c.is_monomial():
            (m, v), = c.items()
            neg = v < 0
            body = format_poly(-c if neg else c)
        else:
            body = f"({format_poly(c)})"
        if op:
            body = op if body == "1" else f"{body}*{op}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


# -- adapted families ------------------------------------------------------


@dataclass
class AdaptedReport:
    """Per-condition outcome of :func:`adapted_check`.

    ``failures`` maps a condition label ("P", "H", "I", "N") to a list of
    human-readable offending entries (1-based positions).
    """

    failures: dict[str, list[str]] = field(default_factory=dict)
    conditions: tuple[str, ...] = ("P", "H", "I", "N")

    @property
    def passed(self) -> bool:
        return not any(self.failures.get(c) for c in self.conditions)

    def ok(self, cond: str) -> bool:
        return not self.failures.get(cond)

    def __str__(self) -> str:
        bits = []
        for c in self.conditions:
            bad = self.failures.get(c) or []
            bits.append(f"({c}) " + ("pass" if not bad else "FAIL: " + "; ".join(bad[:5])))
        return ", ".join(bits)


def check_adapted_matrix(R: PolyMatrix, N: int, k: int) -> AdaptedReport:
    """Check (P), (H), (I), (N) for ``Ω = (1/h) R dt``."""
    dim = R.dim
    rep = AdaptedReport({c: [] for c in ("P", "H", "I", "N")})
    for a in range(dim):
        for b in range(dim):
            x = R[a, b]
            pos = f"({a + 1},{b + 1})"
            if not x.is_polynomial():
                rep.failures["P"].append(f"{pos}={x}")
            # (1/h)R homogeneous: n-diagonal entries of R have degree 2(n+1)
            if not is_homogeneous_of(x, 2 * (b - a + 1), N, k):
                rep.failures["H"].append(f"{pos}={x} (want degree {2 * (b - a + 1)})")
            expect0 = ONE if a == b + 1 else ZERO
            if x.at_q0() != expect0:
                rep.failures["I"].append(f"{pos}|q=0 is {x.at_q0()}")
            if a == b + 1 and x != ONE:
                rep.failures["N"].append(f"{pos}={x}")
    return rep


def adapted_check(F: "AdaptedFamily") -> AdaptedReport:
    return check_adapted_matrix(F.R, F.params.N, F.params.k)


def adapted_gauge_check(U: PolyMatrix, N: int, k: int) -> AdaptedReport:
    """(P), (H), (I) for a gauge transformation ``U``."""
    rep = AdaptedReport({c: [] for c in ("P", "H", "I")}, conditions=("P", "H", "I"))
    I = PolyMatrix.identity(U.dim)
    for a in range(U.dim):
        for b in range(U.dim):
            x = U[a, b]
            pos = f"({a + 1},{b + 1})"
            if not x.is_polynomial():
                rep.failures["P"].append(f"{pos}={x}")
            if not is_homogeneous_of(x, 2 * (b - a), N, k):
                rep.failures["H"].append(f"{pos}={x}")
            if x.at_q0() != I[a, b]:
                rep.failures["I"].append(f"{pos}|q=0 is {x.at_q0()}")
    return rep


def reduced_operator_of_matrix(R: PolyMatrix, N: int, k: int, check: bool = True) -> DiffOperator:
    if check:
        rep = check_adapted_matrix(R, N, k)
        if not rep.passed:
            raise NotAdapted(rep)
    dim = R.dim
    P: list[DiffOperator] = [DiffOperator([ONE])]
    for beta in range(dim):
        nxt = op_mul(HD, P[beta])
        for alpha in range(beta + 1):
            r = R[alpha, beta]
            if r:
                nxt = nxt - P[alpha].lmul(r)
        P.append(nxt)
    return P[dim]


def reduced_operator(F: "AdaptedFamily", check: bool = True) -> DiffOperator:
    """Reduced operator ``P_{N-1}`` of an adapted family."""
    return reduced_operator_of_matrix(F.R, F.params.N, F.params.k, check=check)


def gauge_transform_matrix(U: PolyMatrix, R: PolyMatrix) -> PolyMatrix:
    """``h·(U*Ω)`` for ``Ω = (1/h)R dt``: ``U^{-1} R U + h U^{-1} q dU/dq``."""
    Uinv = unipotent_inverse(U)
    return Uinv @ R @ U + (Uinv @ U.theta()).scale(H)


def gauge_transform(U: PolyMatrix, F: "AdaptedFamily") -> "AdaptedFamily":
    """``U*Ω = U^{-1}dU + U^{-1} Ω U`` as a new family (no θ-part decomposition)."""
    from .picard_fuchs import AdaptedFamily

    return AdaptedFamily(F.params, gauge_transform_matrix(U, F.R), parts=None)
