"""Square matrices of :class:`QHPoly` entries and the n-diagonal constructors.

Indices are 0-based internally.  Text and LaTeX renderings are laid out like
the printed matrices (row by row); ``diag_n`` descriptions use the 1-based
slot order of ``diag_n(a_1, ..., a_m)``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import DimMismatch, LengthMismatch, NotUnipotent, ParseError
from .exact_core import ONE, ZERO, QHPoly, Scalar, format_poly, parse_poly


def _coerce(x) -> QHPoly:
    return x if isinstance(x, QHPoly) else QHPoly.const(x)


class PolyMatrix:
    """Immutable ``dim x dim`` matrix with polynomial entries.

    Storage is dense; multiplication skips zero entries so banded products
    stay cheap.
    """

    __slots__ = ("dim", "_rows", "_hash")

    def __init__(self, rows: Sequence[Sequence[QHPoly | Scalar]]):
        dim = len(rows)
        if dim < 1:
            raise ValueError("dim must be >= 1")
        if any(len(r) != dim for r in rows):
            raise DimMismatch("matrix rows must all have length dim")
        self.dim = dim
        self._rows = tuple(tuple(_coerce(x) for x in r) for r in rows)
        self._hash = None

    @classmethod
    def _raw(cls, rows: tuple[tuple[QHPoly, ...], ...]) -> "PolyMatrix":
        obj = cls.__new__(cls)
        obj.dim = len(rows)
        obj._rows = rows
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, dim: int) -> "PolyMatrix":
        row = (ZERO,) * dim
        return cls._raw((row,) * dim)

    @classmethod
    def identity(cls, dim: int) -> "PolyMatrix":
        return cls._raw(tuple(tuple(ONE if i == j else ZERO for j in range(dim)) for i in range(dim)))

    @classmethod
    def scalar(cls, dim: int, c: QHPoly | Scalar) -> "PolyMatrix":
        c = _coerce(c)
        return cls._raw(tuple(tuple(c if i == j else ZERO for j in range(dim)) for i in range(dim)))

    # -- access ---------------------------------------------------------

    def __getitem__(self, ij: tuple[int, int]) -> QHPoly:
        i, j = ij
        return self._rows[i][j]

    @property
    def rows(self) -> tuple[tuple[QHPoly, ...], ...]:
        return self._rows

    def nonzero(self) -> Iterable[tuple[int, int, QHPoly]]:
        for i, row in enumerate(self._rows):
            for j, x in enumerate(row):
                if x:
                    yield i, j, x

    def is_zero(self) -> bool:
        return not any(x for row in self._rows for x in row)

    def offsets(self) -> set[int]:
        """Diagonal offsets ``j - i`` carrying a nonzero entry."""
        return {j - i for i, j, _ in self.nonzero()}

    def is_n_diagonal(self, n: int) -> bool:
        """True if every nonzero entry lies on diagonal offset ``n`` (zero counts)."""
        return self.offsets() <= {n}

    def band_values(self, n: int) -> list[QHPoly]:
        """The n-diagonal component as the list ``a_1, ..., a_{dim-|n|}``."""
        if n >= 0:
            return [self._rows[i][i + n] for i in range(self.dim - n)]
        return [self._rows[i - n][i] for i in range(self.dim + n)]

    def map(self, f: Callable[[QHPoly], QHPoly]) -> "PolyMatrix":
        return PolyMatrix._raw(tuple(tuple(f(x) for x in row) for row in self._rows))

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix._raw(tuple(zip(*self._rows)))

    def theta(self) -> "PolyMatrix":
        """Entrywise ``q d/dq``."""
        return self.map(QHPoly.theta)

    def at_q0(self) -> "PolyMatrix":
        return self.map(QHPoly.at_q0)

    def is_polynomial(self) -> bool:
        return all(x.is_polynomial() for _, _, x in self.nonzero())

    def is_h_free(self) -> bool:
        return all(x.is_h_free() for _, _, x in self.nonzero())

    def is_constant(self) -> bool:
        return all(x.is_constant() for _, _, x in self.nonzero())

    def is_integral(self) -> bool:
        return all(x.is_integral() for _, _, x in self.nonzero())

    # -- arithmetic -----------------------------------------------------

    def _check(self, other: "PolyMatrix") -> None:
        if not isinstance(other, PolyMatrix):
            raise TypeError(f"expected PolyMatrix, got {type(other).__name__}")
        if other.dim != self.dim:
            raise DimMismatch(f"dimension {self.dim} vs {other.dim}")

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check(other)
        return PolyMatrix._raw(
            tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self._rows, other._rows))
        )

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check(other)
        return PolyMatrix._raw(
            tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(self._rows, other._rows))
        )

    def __neg__(self) -> "PolyMatrix":
        return self.map(QHPoly.__neg__)

    def scale(self, c: QHPoly | Scalar) -> "PolyMatrix":
        c = _coerce(c)
        return self.map(lambda x: x * c)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check(other)
        n = self.dim
        b_rows = [[(j, x) for j, x in enumerate(row) if x] for row in other._rows]
        out = []
        for row in self._rows:
            acc: dict[int, dict] = {}
            for l, a in enumerate(row):
                if not a:
                    continue
                for j, b in b_rows[l]:
                    terms = acc.setdefault(j, {})
                    for (a1, b1), c1 in a._terms.items():
                        for (a2, b2), c2 in b._terms.items():
                            m = (a1 + a2, b1 + b2)
                            terms[m] = terms.get(m, 0) + c1 * c2
            new_row = [ZERO] * n
            for j, terms in acc.items():
                new_row[j] = QHPoly._raw({m: c for m, c in terms.items() if c})
            out.append(tuple(new_row))
        return PolyMatrix._raw(tuple(out))

    def __pow__(self, e: int) -> "PolyMatrix":
        if e < 0:
            raise ValueError("negative matrix powers are not supported")
        out = PolyMatrix.identity(self.dim)
        for _ in range(e):
            out = out @ self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._rows)
        return self._hash

    # -- text -----------------------------------------------------------

    def __repr__(self) -> str:
        return f"PolyMatrix(dim={self.dim})\n{render_matrix(self)}"


def commutator(A: PolyMatrix, B: PolyMatrix) -> PolyMatrix:
    return A @ B - B @ A


def mat_arith(A: PolyMatrix, B: PolyMatrix, op: str) -> PolyMatrix:
    if op == "add":
        return A + B
    if op == "sub":
        return A - B
    if op == "mul":
        return A @ B
    if op == "commutator":
        return commutator(A, B)
    raise ValueError(f"unknown op {op!r}")


def make_diag(dim: int, n: int, values: Sequence[QHPoly | Scalar]) -> PolyMatrix:
    """``diag_n(values)``: superdiagonal offset ``n`` for ``n >= 0``, subdiagonal otherwise."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if abs(n) > dim:
        raise LengthMismatch(f"|n| = {abs(n)} exceeds dim {dim}")
    want = dim - abs(n)
    if len(values) != want:
        raise LengthMismatch(f"diag_{n} in dim {dim} needs {want} values, got {len(values)}")
    rows = [[ZERO] * dim for _ in range(dim)]
    for s, v in enumerate(values):
        if n >= 0:
            rows[s][s + n] = _coerce(v)
        else:
            rows[s - n][s] = _coerce(v)
    return PolyMatrix._raw(tuple(tuple(r) for r in rows))


def shift_matrix(dim: int) -> PolyMatrix:
    """``I_{-1}``: ones on the first subdiagonal."""
    return make_diag(dim, -1, [1] * (dim - 1))


def is_unipotent(A: PolyMatrix) -> bool:
    for i, row in enumerate(A.rows):
        if row[i] != ONE:
            return False
        if any(row[j] for j in range(i)):
            return False
    return True


def unipotent_inverse(A: PolyMatrix) -> PolyMatrix:
    """Exact inverse of ``I + U`` with ``U`` strictly upper triangular.

    Uses the finite Neumann series ``I - U + U^2 - ...``; ``U^dim = 0``.
    """
    if not is_unipotent(A):
        raise NotUnipotent("matrix is not I + strictly upper triangular")
    dim = A.dim
    I = PolyMatrix.identity(dim)
    U = A - I
    out = I
    term = I
    for _ in range(1, dim):
        term = -(term @ U)
        if term.is_zero():
            break
        out = out + term
    return out


# -- rendering ------------------------------------------------------------


def render_matrix(A: PolyMatrix, cell: Callable[[QHPoly], str] = format_poly) -> str:
    """Column-aligned rows; columns are separated by at least two spaces."""
    cells = [[cell(x) for x in row] for row in A.rows]
    widths = [max(len(cells[i][j]) for i in range(A.dim)) for j in range(A.dim)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(lines)


def parse_matrix(text: str) -> PolyMatrix:
    """Inverse of :func:`render_matrix`; ``#`` lines are skipped."""
    rows = []
    for line in text.strip("\n").splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cells = re.split(r"\s{2,}", line.strip())
        rows.append([parse_poly(c) for c in cells])
    if not rows:
        raise ParseError("empty matrix text")
    return PolyMatrix(rows)


def latex_poly(p: QHPoly) -> str:
    """LaTeX in the printed style: ``120qh^{3}``, ``3125q/h``."""
    if p.is_zero():
        return "0"
    out = []
    for idx, ((a, b), c) in enumerate(p.items()):
        mag = abs(c)
        num = []
        if a:
            num.append("q" if a == 1 else f"q^{{{a}}}")
        if b > 0:
            num.append("h" if b == 1 else f"h^{{{b}}}")
        mono = "".join(num)
        if isinstance(mag, Fraction) and mag.denominator != 1:
            coef = f"\\frac{{{mag.numerator}}}{{{mag.denominator}}}"
        else:
            coef = "" if (mag == 1 and (mono or b < 0)) else str(mag)
        body = coef + mono
        if b < 0:
            den = "h" if b == -1 else f"h^{{{-b}}}"
            body = f"{body or '1'}/{den}"
        sign = "-" if c < 0 else ("" if idx == 0 else "+")
        out.append(f"{sign}{body}" if idx == 0 else f" {sign} {body}")
    return "".join(out)


def render_latex(A: PolyMatrix, prefix: str = "") -> str:
    cols = "c" * A.dim
    lines = [f"{prefix}\\left(", f" \\begin{{array}}{{{cols}}}"]
    for row in A.rows:
        lines.append("  " + " & ".join(latex_poly(x) for x in row) + " \\\\")
    lines += [" \\end{array}", "\\right)"]
    return "\n".join(lines)


def describe_diag(A: PolyMatrix) -> str:
    """``diag_n(a_1,...)`` description of a single-band matrix, ``0`` if zero."""
    offs = A.offsets()
    if not offs:
        return "0"
    if len(offs) != 1:
        raise ValueError(f"matrix occupies several diagonals: {sorted(offs)}")
    n = offs.pop()
    vals = ",".join(format_poly(v) for v in A.band_values(n))
    return f"diag_{n}({vals})"
