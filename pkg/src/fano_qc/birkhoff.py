"""Explicit Birkhoff normalization of the Picard-Fuchs connection.

Write ``L_+ = Q_0 (I + h Q_1 + ... + h^{k-2} Q_{k-2})`` with
``Q_0 = I + Σ_α q^α Q_0^α`` and ``Q_i = Σ_α q^α Q_i^α`` (``i ≥ 1``), each
``Q_i^α`` a constant ``(i + α(N-k))``-diagonal matrix.  Requiring that
``L_+ Ω_PF L_+^{-1} + L_+ d(L_+^{-1})`` contain only ``1/h`` gives

    dQ_0 = Q_0 (θ_0 + [Q_1, ω])
    dQ_i = θ_i + Σ_{j=1}^{i-1} Q_j θ_{i-j} + [Q_i, θ_0] + [Q_{i+1}, ω] - [Q_1, ω] Q_i

and comparing coefficients of ``q^{γ-1} dq`` solves for ``γ Q_i^γ`` in terms
of same-γ entries with larger ``i`` and entries of lower γ.  The normalized
connection is then ``(1/h) Q_0 ω Q_0^{-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial

from .banded import PolyMatrix, commutator, describe_diag, shift_matrix, unipotent_inverse
from .errors import BandViolation
from .exact_core import H, H_INV, Q, QHPoly
from .picard_fuchs import AdaptedFamily, FanoParams, build_omega_pf


@dataclass
class QSystem:
    params: FanoParams
    Q: dict[tuple[int, int], PolyMatrix] = field(default_factory=dict)

    def get(self, i: int, alpha: int) -> PolyMatrix:
        """``Q_i^α`` with ``Q_0^0 = I`` and zero outside the stored range."""
        dim = self.params.dim
        if alpha == 0:
            return PolyMatrix.identity(dim) if i == 0 else PolyMatrix.zero(dim)
        return self.Q.get((i, alpha)) or PolyMatrix.zero(dim)

    def max_alpha(self, i: int) -> int:
        return max((a for (j, a) in self.Q if j == i), default=0)

    def q_series(self, i: int) -> PolyMatrix:
        """``Q_i`` as a polynomial matrix in ``q``."""
        dim = self.params.dim
        out = PolyMatrix.identity(dim) if i == 0 else PolyMatrix.zero(dim)
        for a in range(1, self.max_alpha(i) + 1):
            out = out + self.get(i, a).scale(Q**a)
        return out

    @property
    def Q0(self) -> PolyMatrix:
        return self.q_series(0)

    def is_integral(self) -> bool:
        return all(m.is_integral() for m in self.Q.values())

    def describe(self) -> list[str]:
        """``Q_i^α = diag_n(...)`` lines, ``i`` descending within each ``α``."""
        lines = []
        for a in range(1, max((a for _, a in self.Q), default=0) + 1):
            for i in sorted({j for j, b in self.Q if b == a}, reverse=True):
                lines.append(f"Q_{i}^{a} = {describe_diag(self.Q[(i, a)])}")
        return lines


def _total(terms: list[PolyMatrix], dim: int, reverse: bool) -> PolyMatrix:
    out = PolyMatrix.zero(dim)
    for t in (reversed(terms) if reverse else terms):
        out = out + t
    return out


def solve_q_system(F: AdaptedFamily, permuted: bool = False) -> QSystem:
    """Solve for every ``Q_i^α`` (γ ascending, ``i`` descending from ``k-2`` to 0).

    ``permuted`` sums the terms of each identity in reverse order and expands
    commutators as ``-(BA - AB)``; exact arithmetic must give the same result.
    """
    p = F.params
    dim, idx, kk = p.dim, p.index, p.k
    I1 = shift_matrix(dim)
    Rm1 = F.part(-1)
    S = QSystem(p)

    def br(A: PolyMatrix, B: PolyMatrix) -> PolyMatrix:
        return -(B @ A - A @ B) if permuted else commutator(A, B)

    def C(i: int, a: int) -> PolyMatrix:
        # coefficient of q^a dq in [Q_i, ω]
        return br(S.get(i, a + 1), I1) + br(S.get(i, a), Rm1)

    top = max(kk - 2, 0)
    gamma_max = (dim - 1) // idx
    for g in range(1, gamma_max + 1):
        for i in range(top, -1, -1):
            band = i + g * idx
            if band > dim - 1:
                continue
            if i == 0:
                terms = [S.get(0, a) @ (C(1, g - 1 - a) + (F.part(0) if a == g - 1 else PolyMatrix.zero(dim)))
                         for a in range(g)]
            else:
                terms = [F.part(i)] if g == 1 else []
                terms += [S.get(j, g - 1) @ F.part(i - j) for j in range(1, i)]
                terms.append(br(S.get(i, g - 1), F.part(0)))
                terms.append(C(i + 1, g - 1))
                terms += [-(C(1, a) @ S.get(i, g - 1 - a)) for a in range(g - 1)]
            val = _total(terms, dim, permuted).scale(QHPoly.const(Fraction(1, g)))
            if not val.is_constant() or not val.is_n_diagonal(band):
                raise BandViolation(f"Q_{i}^{g} is not a constant {band}-diagonal matrix")
            if not val.is_zero():
                S.Q[(i, g)] = val
    return S


def low_order_identities(F: AdaptedFamily) -> dict[tuple[int, int], PolyMatrix]:
    """``Q_i^1`` and ``Q_i^2`` from the γ = 1, 2 identities as usually displayed.

    Kept separate from :func:`solve_q_system` so the two code paths can be
    compared.
    """
    p = F.params
    dim = p.dim
    I1 = shift_matrix(dim)
    R = F.part
    Z = PolyMatrix.zero(dim)
    top = max(p.k - 2, 0)
    out: dict[tuple[int, int], PolyMatrix] = {}

    def get(i, a):
        if i > top or i + a * p.index > dim - 1:
            return Z
        return out[(i, a)]

    for i in range(top, -1, -1):
        out[(i, 1)] = R(i) + commutator(get(i + 1, 1), I1) if i + p.index <= dim - 1 else Z
    for i in range(top, -1, -1):
        if i + 2 * p.index > dim - 1:
            out[(i, 2)] = Z
            continue
        if i == 0:
            v = get(0, 1) @ (R(0) + commutator(get(1, 1), I1)) + commutator(get(1, 2), I1) + get(1, 1) @ R(-1)
        else:
            v = sum((get(j, 1) @ R(i - j) for j in range(1, i + 2)), Z)
            v = v + commutator(get(i + 1, 2), I1) - commutator(get(1, 1), I1) @ get(i, 1)
        out[(i, 2)] = v.scale(QHPoly.const(Fraction(1, 2)))
    return out


def assemble_lplus(S: QSystem) -> PolyMatrix:
    """``L_+ = Q_0 (I + h Q_1 + ... + h^{k-2} Q_{k-2})``."""
    dim = S.params.dim
    K = PolyMatrix.identity(dim)
    for i in range(1, S.params.k - 1):
        K = K + S.q_series(i).scale(H**i)
    return S.Q0 @ K


@dataclass(frozen=True, eq=False)
class NormalizedConnection:
    """``Ω̂ = (1/h) M dt``; ``shifted`` marks the ``N-k = 1`` Dubrovin shift."""

    params: FanoParams
    M: PolyMatrix
    shifted: bool = False

    @property
    def shift_scalar(self) -> QHPoly:
        return QHPoly.monomial(factorial(self.params.N - 1), 1, 0)

    @cached_property
    def unshifted(self) -> PolyMatrix:
        if not self.shifted:
            return self.M
        return self.M + PolyMatrix.scalar(self.params.dim, self.shift_scalar)

    def as_family(self) -> AdaptedFamily:
        return AdaptedFamily(self.params, self.M, parts=None)

    def is_inverse_h_linear(self) -> bool:
        return self.M.is_h_free()


def normalized_connection(S: QSystem, F: AdaptedFamily) -> NormalizedConnection:
    Q0 = S.Q0
    M = Q0 @ F.omega_part @ unipotent_inverse(Q0)
    if not M.is_h_free():
        raise BandViolation("normalized connection is not 1/h-linear")
    return NormalizedConnection(F.params, M, shifted=False)


@dataclass
class Pipeline:
    """All intermediates for one ``(N, k)``."""

    params: FanoParams
    family: AdaptedFamily
    qsystem: QSystem
    lplus: PolyMatrix
    omega_hat: NormalizedConnection
    dubrovin: NormalizedConnection


def run_pipeline(p: FanoParams, permuted: bool = False) -> Pipeline:
    F = build_omega_pf(p)
    S = solve_q_system(F, permuted=permuted)
    C = normalized_connection(S, F)
    return Pipeline(p, F, S, assemble_lplus(S), C, _shift(C))


def _shift(C: NormalizedConnection) -> NormalizedConnection:
    if C.params.index != 1:
        return C
    M = C.M - PolyMatrix.scalar(C.params.dim, C.shift_scalar)
    return NormalizedConnection(C.params, M, shifted=True)


def dubrovin_connection(p: FanoParams) -> NormalizedConnection:
    """Normalized connection, shifted by ``-(N-1)! q/h · I`` when ``N - k = 1``."""
    F = build_omega_pf(p)
    return _shift(normalized_connection(solve_q_system(F), F))


def verify_gauge(Lp: PolyMatrix, F: AdaptedFamily, C: NormalizedConnection) -> bool:
    """Check ``(1/h) M = L_+ Ω_PF L_+^{-1} + L_+ d(L_+^{-1})`` exactly."""
    try:
        Linv = unipotent_inverse(Lp)
    except ValueError:
        return False
    rhs = Lp @ F.omega_matrix @ Linv + Lp @ Linv.theta()
    return rhs == C.unshifted.scale(H_INV)
