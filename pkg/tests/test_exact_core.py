from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from fano_qc.errors import InhomogeneousError, ParseError, ZeroPolynomialError
from fano_qc.exact_core import H, H_INV, ONE, Q, ZERO, QHPoly, parse_poly, poly_arith, weighted_degree

qs, hs = sympy.symbols("q h")


def to_sympy(p: QHPoly):
    return sum((sympy.Rational(c.numerator, c.denominator) * qs**a * hs**b for (a, b), c in p.items()), sympy.Integer(0))


rationals = st.fractions(min_value=-50, max_value=50, max_denominator=7)
monomials = st.tuples(st.integers(0, 4), st.integers(-1, 4))
polys = st.dictionaries(monomials, rationals, max_size=5).map(QHPoly)
int_polys = st.dictionaries(monomials, st.integers(-30, 30), max_size=5).map(QHPoly)


def test_cancellation():
    assert poly_arith(Q + H, Q - H, "add") == QHPoly.monomial(2, 1, 0)


def test_product_of_monomials():
    assert poly_arith(Q, H, "mul") == QHPoly.monomial(1, 1, 1)


def test_negative_h_power_product_matches_sympy():
    p = QHPoly.monomial(3, 2, 1)
    r = QHPoly.monomial(2, 0, -1)
    got = p * r
    assert got == QHPoly.monomial(6, 2, 0)
    assert sympy.expand(to_sympy(got) - to_sympy(p) * to_sympy(r)) == 0


@given(polys, polys)
def test_arith_agrees_with_sympy(p, r):
    for op, f in (("add", lambda a, b: a + b), ("sub", lambda a, b: a - b), ("mul", lambda a, b: a * b)):
        got = poly_arith(p, r, op)
        assert sympy.expand(to_sympy(got) - f(to_sympy(p), to_sympy(r))) == 0


@given(polys)
def test_no_stored_zeros(p):
    assert all(c != 0 for c in p.terms.values())
    assert (p - p).is_zero()


@given(polys)
def test_text_round_trip(p):
    assert parse_poly(str(p)) == p


@given(int_polys, int_polys)
def test_integers_stay_integral(p, r):
    for op in ("add", "sub", "mul"):
        assert poly_arith(p, r, op).is_integral()


def test_canonical_order():
    p = QHPoly({(2, 0): 4464, (0, 0): 1, (1, 0): 24})
    assert str(p) == "1 + 24*q + 4464*q^2"
    assert str(QHPoly({(1, -1): 3125})) == "3125*q*h^-1"
    assert str(QHPoly({(0, 0): Fraction(-3, 2), (1, 1): -1})) == "-3/2 - q*h"
    assert str(ZERO) == "0"


def test_parse_rejects_garbage():
    for bad in ("", "q +", "2 3", "x"):
        with pytest.raises(ParseError):
            parse_poly(bad)


@pytest.mark.parametrize(
    "p, nk, deg",
    [(Q, (7, 5), 4), (QHPoly.monomial(1, 1, 2), (7, 5), 8), (H_INV * Q * 3125, (7, 5), 2), (ONE, (5, 4), 0)],
)
def test_weighted_degree(p, nk, deg):
    assert weighted_degree(p, *nk) == deg


def test_weighted_degree_inhomogeneous():
    with pytest.raises(InhomogeneousError) as exc:
        weighted_degree(Q + H, 7, 5)
    assert exc.value.monomials == {(1, 0): 4, (0, 1): 2}


def test_weighted_degree_zero():
    with pytest.raises(ZeroPolynomialError):
        weighted_degree(ZERO, 7, 5)


homog = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(1, 4), st.integers(1, 4))


@given(homog, homog, st.integers(1, 6), st.integers(1, 5))
def test_degree_additive(m1, m2, k, gap):
    N = k + gap
    # build homogeneous polynomials: q^a h^b plus the same-degree monomial q^(a+1) h^(b-(N-k))
    def make(t):
        a, b, c1, c2 = t
        terms = {(a, b + gap): c1}
        terms[(a + 1, b)] = c2
        return QHPoly(terms)

    p, r = make(m1), make(m2)
    assert weighted_degree(p * r, N, k) == weighted_degree(p, N, k) + weighted_degree(r, N, k)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        Q / 0
    assert Q / 2 == QHPoly.monomial(Fraction(1, 2), 1)


def test_theta_is_q_derivative():
    p = parse_poly("1 + 3*q^2*h - q^5")
    assert p.theta() == parse_poly("6*q^2*h - 5*q^5")
