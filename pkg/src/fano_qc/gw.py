"""Structure constants and 3-point Gromov-Witten invariants from ``Ω̂``.

Column ``β = N-2-m`` of the Dubrovin matrix ``M`` holds ``b ∘ b_β``:

    b ∘ b_{N-2-m} = b_{N-1-m} + Σ_{d≥1} L_m^d q^d b_{N-1-m-d(N-k)}

and ``GW_{dA}(b, b_{N-2-m}, b_{m-1+d(N-k)}) = k L_m^d``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .banded import PolyMatrix, unipotent_inverse
from .birkhoff import NormalizedConnection
from .errors import MalformedConnection
from .exact_core import ONE, QHPoly
from .picard_fuchs import FanoParams


@dataclass(frozen=True)
class GWRecord:
    d: int
    classes: tuple[int, int, int]
    value: Fraction

    def degree_balanced(self, p: FanoParams) -> bool:
        # deg is 2*(class index); both sides halved
        return sum(self.classes) == (p.N - 2) + self.d * p.index


@dataclass
class GWTable:
    params: FanoParams
    L: dict[tuple[int, int], Fraction] = field(default_factory=dict)

    @property
    def d_max(self) -> int:
        return (self.params.N - 1) // self.params.index

    def value(self, m: int, d: int) -> Fraction:
        return self.L.get((m, d), Fraction(0))

    def is_integral(self) -> bool:
        return all((self.params.k * v).denominator == 1 for v in self.L.values())

    def records(self) -> list[GWRecord]:
        return gw_invariants(self)

    def to_dict(self) -> dict:
        p = self.params
        return {
            "N": p.N,
            "k": p.k,
            "L": [{"m": m, "d": d, "value": str(v)} for (m, d), v in _ordered(self.L)],
            "gw": [{"d": r.d, "classes": list(r.classes), "value": str(r.value)} for r in self.records()],
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: dict, allow_small: bool = True) -> "GWTable":
        p = FanoParams(int(data["N"]), int(data["k"]), allow_small=allow_small)
        L = {(int(e["m"]), int(e["d"])): Fraction(e["value"]) for e in data["L"]}
        table = cls(p, L)
        if "gw" in data:
            got = [(int(e["d"]), tuple(e["classes"]), Fraction(e["value"])) for e in data["gw"]]
            want = [(r.d, r.classes, r.value) for r in table.records()]
            if got != want:
                raise ValueError("gw records are inconsistent with L")
        return table

    @classmethod
    def from_json(cls, text: str) -> "GWTable":
        return cls.from_dict(json.loads(text))


def _ordered(L: dict[tuple[int, int], Fraction]):
    return sorted(L.items(), key=lambda kv: (kv[0][1], kv[0][0]))


def admissible(p: FanoParams, m: int, d: int) -> bool:
    return d >= 1 and 0 <= m <= (p.N - 1) - p.index * d


def structural_constants(C: NormalizedConnection) -> GWTable:
    p = C.params
    if p.index == 1 and not C.shifted:
        raise MalformedConnection("N - k = 1 needs the shifted Dubrovin form")
    M = C.M
    dim = p.dim
    L: dict[tuple[int, int], Fraction] = {}
    for beta in range(dim):
        m = dim - 1 - beta
        for alpha in range(dim):
            x = M[alpha, beta]
            pos = f"({alpha + 1},{beta + 1})"
            if alpha == beta + 1:
                if x != ONE:
                    raise MalformedConnection(f"subdiagonal entry {pos} is {x}, expected 1")
                continue
            if alpha > beta + 1:
                if x:
                    raise MalformedConnection(f"entry {pos} below the subdiagonal is {x}")
                continue
            gap = beta + 1 - alpha
            if gap % p.index:
                if x:
                    raise MalformedConnection(f"entry {pos} = {x} at a slot with no degree")
                continue
            d = gap // p.index
            if not x:
                L[(m, d)] = Fraction(0)
                continue
            if not (x.is_monomial() and x.is_h_free() and x.q_degree() == d):
                raise MalformedConnection(f"entry {pos} = {x} is not a multiple of q^{d}")
            L[(m, d)] = x.coeff(d, 0)
    return GWTable(p, L)


def gw_invariants(T: GWTable) -> list[GWRecord]:
    p = T.params
    out = []
    for (m, d), v in _ordered(T.L):
        if not admissible(p, m, d):
            continue
        out.append(GWRecord(d, (1, p.N - 2 - m, m - 1 + d * p.index), p.k * v))
    return out


def pairing_matrix(p: FanoParams) -> PolyMatrix:
    """``J_{α,β} = k δ_{α+β, N-2}``."""
    dim = p.dim
    rows = [[p.k if a + b == dim - 1 else 0 for b in range(dim)] for a in range(dim)]
    return PolyMatrix(rows)


def pairing_symmetry_check(C: NormalizedConnection) -> bool:
    J = pairing_matrix(C.params)
    return J @ C.M == C.M.transpose() @ J


def relation_matrix(C: NormalizedConnection) -> PolyMatrix:
    """Multiplication by ``b̃``: ``b + k! q`` when ``N - k = 1``, else ``b``."""
    p = C.params
    if p.index == 1 and C.shifted:
        return C.M + PolyMatrix.scalar(p.dim, QHPoly.monomial(factorial(p.k), 1))
    return C.M


def quantum_relation_check(C: NormalizedConnection) -> bool:
    """``b̃^{N-1} = k^k q b̃^{k-1}`` as an identity of polynomial matrices."""
    p = C.params
    Mt = relation_matrix(C)
    lhs = Mt ** (p.N - 1)
    rhs = (Mt ** (p.k - 1)).scale(QHPoly.monomial(p.k**p.k, 1))
    return lhs == rhs


def homogeneity_check(C: NormalizedConnection) -> list[str]:
    """Entries of ``M`` that are not ``c q^d`` with ``d(N-k) = β - α + 1``."""
    p = C.params
    bad = []
    for a, b, x in C.M.nonzero():
        gap = b - a + 1
        ok = x.is_monomial() and x.is_h_free() and gap >= 0 and gap % p.index == 0
        ok = ok and x.q_degree() == gap // p.index
        if not ok:
            bad.append(f"({a + 1},{b + 1})={x}")
    return bad


Term = tuple[Fraction, int, int]


def _vec_terms(col: list[QHPoly]) -> list[Term]:
    out = []
    for idx, x in enumerate(col):
        for (a, b), c in x.items():
            out.append((c, a, idx))
    return sorted(out, key=lambda t: (t[2], t[1]))


def _apply(A: PolyMatrix, v: list[QHPoly]) -> list[QHPoly]:
    out = []
    for row in A.rows:
        acc = QHPoly()
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return out


def cup_polynomials(C: NormalizedConnection) -> list[list[QHPoly]]:
    """``p_i`` with ``b_i = p_i(b)`` in the quantum ring (coefficients by power).

    ``V`` has columns ``M^j e_0`` and is unit upper triangular; ``p_i`` is
    column ``i`` of ``V^{-1}``.
    """
    M, dim = C.M, C.params.dim
    cols = []
    v = [ONE if i == 0 else QHPoly() for i in range(dim)]
    for _ in range(dim):
        cols.append(v)
        v = _apply(M, v)
    V = PolyMatrix([[cols[j][i] for j in range(dim)] for i in range(dim)])
    W = unipotent_inverse(V)
    return [[W[j, i] for j in range(dim)] for i in range(dim)]


def quantum_mult_table(C: NormalizedConnection) -> dict[tuple[int, int], list[Term]]:
    """``b_i ∘ b_j`` as lists of ``(coefficient, q-power, basis index)``."""
    M, dim = C.M, C.params.dim
    polys = cup_polynomials(C)
    powers = [PolyMatrix.identity(dim)]
    for _ in range(dim - 1):
        powers.append(powers[-1] @ M)
    table = {}
    for i in range(dim):
        Pi = PolyMatrix.zero(dim)
        for j, c in enumerate(polys[i]):
            if c:
                Pi = Pi + powers[j].scale(c)
        for j in range(dim):
            table[(i, j)] = _vec_terms([Pi[a, j] for a in range(dim)])
    return table


def _power(x: str, e: int, sep: str = "") -> str:
    if e == 0:
        return ""
    return f"{sep}{x}" if e == 1 else f"{sep}{x}^{e}"


def primitive_relations(p: FanoParams) -> list[str]:
    """Closed forms of the products involving primitive classes ``a, ã``."""
    bt = "b~"
    kk = p.k**p.k
    if p.k == 1:
        # a linear subspace has no primitive cohomology
        return ["P = 0"]
    rel = f"a∘ã = (1/{p.k})(a,ã)({_power(bt, p.N - 2)} - {kk}*q{_power(bt, p.k - 2, '*')})"
    head = "b~ = b + %d*q" % factorial(p.k) if p.index == 1 else "b~ = b"
    return [head, f"{bt}∘a = 0", rel]

