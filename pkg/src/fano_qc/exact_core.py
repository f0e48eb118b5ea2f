"""Exact scalars and sparse bigraded polynomials in ``q`` and ``h``.

Scalars are :class:`fractions.Fraction`; a :class:`QHPoly` is an immutable
map ``(q_exp, h_exp) -> Fraction`` with no stored zeros.  ``q`` exponents are
nonnegative, ``h`` exponents may be negative (connection forms carry a single
``1/h``); callers that forbid negative powers check :meth:`QHPoly.is_polynomial`.

With ``deg h = 2`` and ``deg q = 2(N - k)`` the monomial ``q^a h^b`` has
weighted degree ``2a(N - k) + 2b``; see :func:`weighted_degree`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import InhomogeneousError, ParseError, ZeroPolynomialError

Scalar = Union[int, Fraction]
Monomial = tuple[int, int]


def as_rational(x: Scalar) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class QHPoly:
    """Polynomial in ``q`` (nonnegative powers) and ``h`` (integer powers)."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: dict[Monomial, Fraction] = {}
        for (a, b), c in (terms or {}).items():
            if a < 0:
                raise ValueError(f"negative q exponent {a}")
            c = as_rational(c)
            if c:
                clean[(int(a), int(b))] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, Fraction]) -> "QHPoly":
        # trusted constructor: terms already exact and nonzero
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Scalar) -> "QHPoly":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, c: Scalar, q_exp: int = 0, h_exp: int = 0) -> "QHPoly":
        return cls({(q_exp, h_exp): c})

    @classmethod
    def coerce(cls, x: "QHPoly | Scalar") -> "QHPoly":
        if isinstance(x, QHPoly):
            return x
        return cls.const(x)

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def coeff(self, q_exp: int, h_exp: int = 0) -> Fraction:
        return self._terms.get((q_exp, h_exp), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(m == (0, 0) for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.coeff(0, 0)

    def is_polynomial(self) -> bool:
        """True when no negative power of ``h`` occurs."""
        return all(b >= 0 for _, b in self._terms)

    def is_h_free(self) -> bool:
        return all(b == 0 for _, b in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    def q_degree(self) -> int:
        return max((a for a, _ in self._terms), default=-1)

    def h_exponents(self) -> set[int]:
        return {b for _, b in self._terms}

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, QHPoly):
            if isinstance(other, (int, Fraction)):
                other = QHPoly.const(other)
            else:
                return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return QHPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "QHPoly":
        return QHPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, QHPoly):
            if isinstance(other, (int, Fraction)):
                other = QHPoly.const(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return QHPoly._raw({})
            return QHPoly._raw({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, QHPoly):
            return NotImplemented
        if not self._terms or not other._terms:
            return QHPoly._raw({})
        out: dict[Monomial, Fraction] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                m = (a1 + a2, b1 + b2)
                out[m] = out.get(m, 0) + c1 * c2
        return QHPoly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division of QHPoly by zero")
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int) -> "QHPoly":
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def theta(self) -> "QHPoly":
        """Apply ``q d/dq`` (the action of ``d/dt`` with ``q = e^t``)."""
        return QHPoly._raw({(a, b): c * a for (a, b), c in self._terms.items() if a})

    def at_q0(self) -> "QHPoly":
        return QHPoly._raw({m: c for m, c in self._terms.items() if m[0] == 0})

    def at_h1(self) -> "QHPoly":
        """Specialize ``h = 1``."""
        out: dict[Monomial, Fraction] = {}
        for (a, _), c in self._terms.items():
            out[(a, 0)] = out.get((a, 0), 0) + c
        return QHPoly._raw({m: c for m, c in out.items() if c})

    def shift_h(self, n: int) -> "QHPoly":
        return QHPoly._raw({(a, b + n): c for (a, b), c in self._terms.items()})

    # -- comparison -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QHPoly.const(other)
        if not isinstance(other, QHPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- text -------------------------------------------------------------

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"QHPoly({format_poly(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "QHPoly":
        return parse_poly(text)


ZERO = QHPoly._raw({})
ONE = QHPoly._raw({(0, 0): Fraction(1)})
Q = QHPoly._raw({(1, 0): Fraction(1)})
H = QHPoly._raw({(0, 1): Fraction(1)})
H_INV = QHPoly._raw({(0, -1): Fraction(1)})


def poly_arith(p: QHPoly, r: QHPoly, op: str) -> QHPoly:
    if op == "add":
        return p + r
    if op == "sub":
        return p - r
    if op == "mul":
        return p * r
    raise ValueError(f"unknown op {op!r}")


def monomial_degree(q_exp: int, h_exp: int, N: int, k: int) -> int:
    return 2 * q_exp * (N - k) + 2 * h_exp


def weighted_degree(p: QHPoly, N: int, k: int) -> int:
    """Weighted degree of a homogeneous polynomial (``deg h = 2``, ``deg q = 2(N-k)``)."""
    if p.is_zero():
        raise ZeroPolynomialError("weighted degree of 0 is undefined")
    degs = {m: monomial_degree(m[0], m[1], N, k) for m in p.terms}
    if len(set(degs.values())) > 1:
        raise InhomogeneousError(degs)
    return next(iter(degs.values()))


def is_homogeneous_of(p: QHPoly, degree: int, N: int, k: int) -> bool:
    """True if ``p`` is zero or homogeneous of the given weighted degree."""
    return all(monomial_degree(a, b, N, k) == degree for a, b in p.terms)


# -- canonical text form ----------------------------------------------------


def _format_monomial(a: int, b: int) -> str:
    parts = []
    if a:
        parts.append("q" if a == 1 else f"q^{a}")
    if b:
        parts.append("h" if b == 1 else f"h^{b}")
    return "*".join(parts)


def format_poly(p: QHPoly) -> str:
    items = p.items()
    if not items:
        return "0"
    out = []
    for idx, ((a, b), c) in enumerate(items):
        mono = _format_monomial(a, b)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if idx == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?P<coef>\d+(?:/\d+)?)?
        (?P<factors>(?:\s*\*?\s*[qh](?:\^-?\d+)?)*)\s*""",
    re.VERBOSE,
)
_FACTOR = re.compile(r"([qh])(?:\^(-?\d+))?")


def parse_poly(text: str) -> QHPoly:
    """Parse the canonical text form, e.g. ``"1 + 24*q - 3/2*q^2*h^-1"``."""
    s = text.strip()
    if not s:
        raise ParseError("empty polynomial text")
    terms: dict[Monomial, Fraction] = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"cannot parse {text!r} at offset {pos}")
        sign, coef, factors = m.group("sign"), m.group("coef"), m.group("factors")
        if not coef and not factors.strip():
            raise ParseError(f"empty term in {text!r} at offset {pos}")
        if sign is None and not first:
            raise ParseError(f"missing operator in {text!r} at offset {pos}")
        c = Fraction(coef) if coef else Fraction(1)
        if sign == "-":
            c = -c
        a = b = 0
        for var, exp in _FACTOR.findall(factors):
            e = int(exp) if exp else 1
            if var == "q":
                a += e
            else:
                b += e
        if a < 0:
            raise ParseError(f"negative q exponent in {text!r}")
        terms[(a, b)] = terms.get((a, b), 0) + c
        pos = m.end()
        first = False
    return QHPoly(terms)


def poly_sum(polys: Iterable[QHPoly]) -> QHPoly:
    out: dict[Monomial, Fraction] = {}
    for p in polys:
        for m, c in p._terms.items():
            out[m] = out.get(m, 0) + c
    return QHPoly._raw({m: c for m, c in out.items() if c})
