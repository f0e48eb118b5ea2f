"""Picard-Fuchs data of a Fano hypersurface of degree ``k`` in ``CP^{N-1}``.

The constants ``λ_i`` are the coefficients of ``k ∏_{j=1}^{k-1} (kX + j)``.
The operator is

    P = (h∂)^{N-1} - q (λ_{k-1} (h∂)^{k-1} + λ_{k-2} h (h∂)^{k-2} + ... + λ_0 h^{k-1})

and the connection of the cyclic basis ``1, h∂, ..., (h∂)^{N-2}`` is
``Ω_PF = (1/h) R dt`` with ``R = I_{-1} + q Σ_{i=-1}^{k-2} h^{i+1} R_i``, where
``R_i = diag_{N-k+i}(0, ..., 0, λ_{k-2-i})``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .banded import PolyMatrix, make_diag, shift_matrix
from .errors import InvalidParams
from .exact_core import H, H_INV, ONE, Q, ZERO, QHPoly
from .weyl import DiffOperator

MIN_N = 5
MIN_N_SMALL = 3


@dataclass(frozen=True)
class FanoParams:
    N: int
    k: int
    allow_small: bool = field(default=False, compare=False)

    def __post_init__(self):
        N, k = self.N, self.k
        if not (isinstance(N, int) and isinstance(k, int)):
            raise InvalidParams("N and k must be integers")
        if k < 1:
            raise InvalidParams(f"k must be >= 1, got {k}")
        if N <= k:
            raise InvalidParams(f"need N > k for a Fano hypersurface, got N={N}, k={k}")
        floor = MIN_N_SMALL if self.allow_small else MIN_N
        if N < floor:
            hint = "" if self.allow_small else " (allow_small / --allow-small permits N = 3, 4)"
            raise InvalidParams(f"N must be >= {floor}, got {N}{hint}")

    @property
    def dim(self) -> int:
        return self.N - 1

    @property
    def index(self) -> int:
        """``N - k``: the first Chern class is ``(N-k) b``."""
        return self.N - self.k


def lambda_coeffs(k: int) -> list[int]:
    """``[λ_0, ..., λ_{k-1}]`` with ``k ∏_{j=1}^{k-1}(kX + j) = Σ λ_i X^i``."""
    if k < 1:
        raise InvalidParams(f"k must be >= 1, got {k}")
    poly = [k]
    for j in range(1, k):
        nxt = [0] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i] += c * j
            nxt[i + 1] += c * k
        poly = nxt
    return poly


def picard_fuchs_operator(p: FanoParams) -> DiffOperator:
    lam = lambda_coeffs(p.k)
    coeffs = [ZERO] * p.N
    coeffs[p.N - 1] = ONE
    for g in range(p.k):
        coeffs[g] = QHPoly.monomial(-lam[g], 1, p.k - 1 - g)
    return DiffOperator(coeffs)


def r_part(p: FanoParams, i: int) -> PolyMatrix:
    """``R_i`` for ``-1 <= i <= k-2``; zero outside that range."""
    dim = p.dim
    if not -1 <= i <= p.k - 2:
        return PolyMatrix.zero(dim)
    n = p.index + i
    lam = lambda_coeffs(p.k)
    return make_diag(dim, n, [0] * (dim - n - 1) + [lam[p.k - 2 - i]])


@dataclass(frozen=True, eq=False)
class AdaptedFamily:
    """``Ω = (1/h) R dt``; ``parts`` holds ``R_{-1}, ..., R_{k-2}`` when known."""

    params: FanoParams
    R: PolyMatrix
    parts: dict[int, PolyMatrix] | None = None

    @cached_property
    def omega_matrix(self) -> PolyMatrix:
        """Entries of ``Ω`` itself, i.e. ``R / h``."""
        return self.R.scale(H_INV)

    def part(self, i: int) -> PolyMatrix:
        if self.parts is None:
            raise ValueError("family carries no θ-part decomposition")
        return self.parts.get(i, PolyMatrix.zero(self.params.dim))

    @property
    def omega_part(self) -> PolyMatrix:
        """h-free ``ω = I_{-1} + q R_{-1}`` (coefficient of ``dt``)."""
        return shift_matrix(self.params.dim) + self.part(-1).scale(Q)

    def is_inverse_h_linear(self) -> bool:
        return self.R.is_h_free()


def build_omega_pf(p: FanoParams) -> AdaptedFamily:
    dim = p.dim
    parts = {i: r_part(p, i) for i in range(-1, p.k - 1)}
    R = shift_matrix(dim)
    for i, Ri in parts.items():
        R = R + Ri.scale(Q * H ** (i + 1))
    return AdaptedFamily(p, R, parts)
