from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fano_qc.banded import (
    PolyMatrix,
    commutator,
    describe_diag,
    make_diag,
    mat_arith,
    parse_matrix,
    render_matrix,
    shift_matrix,
    unipotent_inverse,
)
from fano_qc.errors import DimMismatch, LengthMismatch, NotUnipotent
from fano_qc.exact_core import ONE, Q, QHPoly


def brute_mul(A, B):
    n = len(A)
    return [[sum(A[i][l] * B[l][j] for l in range(n)) for j in range(n)] for i in range(n)]


def to_ints(M: PolyMatrix):
    return [[x.constant_value() for x in row] for row in M.rows]


def test_shift_matrix_is_diag_minus_one():
    I1 = make_diag(6, -1, [1] * 5)
    assert I1 == shift_matrix(6)
    assert all(I1[i + 1, i] == ONE for i in range(5))
    assert I1.offsets() == {-1}


def test_top_right_single_entry():
    A = make_diag(6, 5, [120])
    assert A[0, 5] == QHPoly.const(120)
    assert len(list(A.nonzero())) == 1


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        make_diag(4, 0, [1, 2, 3])


def test_commutator_self_vanishes():
    A = make_diag(5, 2, [Q, 3, 0])
    assert commutator(A, A).is_zero()


def test_band_product_example():
    P = make_diag(6, 3, [1, 1, 1]) @ make_diag(6, 2, [1, 1, 1, 1])
    assert P.offsets() == {5}


def test_q31_commutator_against_brute_force():
    Q31 = make_diag(6, 5, [120])
    I1 = shift_matrix(6)
    a, b = to_ints(Q31), to_ints(I1)
    ab, ba = brute_mul(a, b), brute_mul(b, a)
    expected = [[ab[i][j] - ba[i][j] for j in range(6)] for i in range(6)]
    got = mat_arith(Q31, I1, "commutator")
    assert to_ints(got) == expected
    assert got == make_diag(6, 4, [120, -120])
    # consistent with Q_2^1 = R_2 + [Q_3^1, I_{-1}] for M_7^5
    assert make_diag(6, 4, [0, 1250]) + got == make_diag(6, 4, [120, 1130])


def test_dim_mismatch():
    with pytest.raises(DimMismatch):
        PolyMatrix.identity(3) @ PolyMatrix.identity(4)


def test_unipotent_identity():
    I = PolyMatrix.identity(5)
    assert unipotent_inverse(I) == I


def test_unipotent_inverse_series():
    A = PolyMatrix.identity(4) + make_diag(4, 1, [1, 2, 3]).scale(Q)
    inv = unipotent_inverse(A)
    assert A @ inv == PolyMatrix.identity(4)
    # I - qU + q^2 U^2 - q^3 U^3
    U = make_diag(4, 1, [1, 2, 3])
    expected = PolyMatrix.identity(4) - U.scale(Q) + (U @ U).scale(Q**2) - (U @ U @ U).scale(Q**3)
    assert inv == expected


def test_not_unipotent():
    with pytest.raises(NotUnipotent):
        unipotent_inverse(PolyMatrix.scalar(3, 2))
    with pytest.raises(NotUnipotent):
        unipotent_inverse(PolyMatrix.identity(3) + shift_matrix(3))


small_poly = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 2)), st.integers(-9, 9), max_size=2
).map(QHPoly)


@st.composite
def banded(draw, dim, n):
    vals = draw(st.lists(small_poly, min_size=dim - abs(n), max_size=dim - abs(n)))
    return make_diag(dim, n, vals)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_band_additivity(data):
    dim = data.draw(st.integers(3, 10))
    n = data.draw(st.integers(-(dim - 1), dim - 1))
    m = data.draw(st.integers(-(dim - 1), dim - 1))
    A, B = data.draw(banded(dim, n)), data.draw(banded(dim, m))
    assert (A @ B).offsets() <= {n + m}


@st.composite
def unipotent(draw):
    dim = draw(st.integers(2, 7))
    U = PolyMatrix.identity(dim)
    for n in range(1, dim):
        U = U + draw(banded(dim, n))
    return U


@settings(max_examples=40, deadline=None)
@given(unipotent())
def test_unipotent_inverse_two_sided(U):
    inv = unipotent_inverse(U)
    I = PolyMatrix.identity(U.dim)
    assert U @ inv == I
    assert inv @ U == I


def test_render_parse_round_trip():
    A = make_diag(4, 1, [Q, QHPoly.monomial(Fraction(-3, 2), 2, 1), 7])
    assert parse_matrix(render_matrix(A)) == A
    assert parse_matrix("# header\n" + render_matrix(A)) == A


def test_describe_diag():
    assert describe_diag(make_diag(6, 4, [120, 1130])) == "diag_4(120,1130)"
    assert describe_diag(PolyMatrix.zero(3)) == "0"
