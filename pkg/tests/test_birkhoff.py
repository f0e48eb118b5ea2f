import pytest

from conftest import golden_diag, golden_matrix
from fano_qc.banded import PolyMatrix, commutator, render_matrix
from fano_qc.birkhoff import (
    assemble_lplus,
    dubrovin_connection,
    low_order_identities,
    normalized_connection,
    run_pipeline,
    solve_q_system,
    verify_gauge,
)
from fano_qc.exact_core import QHPoly
from fano_qc.picard_fuchs import FanoParams, build_omega_pf
from fano_qc.verify import fano_pairs


@pytest.fixture(scope="module")
def pipes():
    return {nk: run_pipeline(FanoParams(*nk)) for nk in [(7, 5), (5, 4), (5, 3)]}


@pytest.mark.parametrize("name", ["m7_5", "m5_4"])
def test_q_matrices_match_golden(name, request, pipes):
    g = request.getfixturevalue(name)
    S = pipes[(g["N"], g["k"])].qsystem
    want = {tuple(map(int, key.split(","))): golden_diag(g["N"] - 1, band) for key, band in g["Q"].items()}
    assert {key: m for key, m in S.Q.items()} == want


def test_last_q_of_5_4(pipes):
    S = pipes[(5, 4)].qsystem
    assert S.get(0, 3).band_values(3) == [QHPoly.const(1109376)]
    assert S.max_alpha(0) == 3


@pytest.mark.parametrize("name", ["m7_5", "m5_4"])
def test_lplus_and_omega_hat_match_golden(name, request, pipes):
    g = request.getfixturevalue(name)
    pl = pipes[(g["N"], g["k"])]
    assert pl.qsystem.Q0 == golden_matrix(g["Q0"])
    assert pl.lplus == golden_matrix(g["lplus"])
    assert pl.omega_hat.M == golden_matrix(g["omega_hat"])
    assert not pl.omega_hat.shifted


def test_dubrovin_5_4(m5_4, pipes):
    D = dubrovin_connection(FanoParams(5, 4))
    assert D.shifted
    assert D.M == golden_matrix(m5_4["dubrovin"])
    assert D.M == pipes[(5, 4)].dubrovin.M
    assert [D.M[i, i] for i in range(4)] == [QHPoly(), QHPoly.monomial(80, 1), QHPoly.monomial(80, 1), QHPoly()]
    assert D.unshifted == pipes[(5, 4)].omega_hat.M


def test_dubrovin_equals_normalized_when_index_above_one(pipes):
    D = dubrovin_connection(FanoParams(7, 5))
    assert not D.shifted
    assert D.M == pipes[(7, 5)].omega_hat.M


@pytest.mark.parametrize("N", [5, 8, 11])
def test_hyperplane_needs_no_correction(N):
    pl = run_pipeline(FanoParams(N, 1))
    assert pl.qsystem.Q == {}
    assert pl.qsystem.Q0 == PolyMatrix.identity(N - 1)
    assert pl.lplus == PolyMatrix.identity(N - 1)
    assert pl.omega_hat.M == pl.family.omega_part
    assert verify_gauge(PolyMatrix.identity(N - 1), pl.family, pl.omega_hat)


@pytest.mark.parametrize("N,k", [(7, 5), (5, 4), (9, 7), (10, 6), (8, 3)])
def test_low_order_identities_agree(N, k):
    F = build_omega_pf(FanoParams(N, k))
    S = solve_q_system(F)
    for (i, a), m in low_order_identities(F).items():
        assert m == S.get(i, a), (i, a)


def test_first_step_by_hand():
    # Q_3^1 = R_3 for (7,5); then Q_2^1 = R_2 + [Q_3^1, I_{-1}]
    F = build_omega_pf(FanoParams(7, 5))
    S = solve_q_system(F)
    assert S.get(3, 1) == F.part(3)
    I1 = F.omega_part - F.part(-1).scale(QHPoly.monomial(1, 1))
    assert S.get(2, 1) == F.part(2) + commutator(S.get(3, 1), I1)


def test_gauge_identity_golden_data(pipes):
    for pl in pipes.values():
        assert verify_gauge(pl.lplus, pl.family, pl.omega_hat)
        assert verify_gauge(pl.lplus, pl.family, pl.dubrovin)


@pytest.mark.parametrize("N,k", [(7, 5), (6, 2), (9, 4)])
def test_gauge_identity_rejects_identity(N, k):
    pl = run_pipeline(FanoParams(N, k))
    assert not verify_gauge(PolyMatrix.identity(N - 1), pl.family, pl.omega_hat)


def test_gauge_identity_rejects_non_unipotent(pipes):
    pl = pipes[(5, 3)]
    assert not verify_gauge(PolyMatrix.zero(4), pl.family, pl.omega_hat)


def test_inverse_h_linear_sweep():
    for N, k in fano_pairs(10):
        pl = run_pipeline(FanoParams(N, k))
        assert pl.omega_hat.is_inverse_h_linear()
        assert pl.lplus.is_polynomial()
        assert pl.qsystem.is_integral()


@pytest.mark.parametrize("N,k", [(7, 5), (5, 4), (6, 2), (9, 7), (12, 8)])
def test_permuted_order_identical(N, k):
    a = run_pipeline(FanoParams(N, k))
    b = run_pipeline(FanoParams(N, k), permuted=True)
    assert a.qsystem.Q == b.qsystem.Q
    assert render_matrix(a.omega_hat.M) == render_matrix(b.omega_hat.M)


def test_normalized_connection_from_parts():
    F = build_omega_pf(FanoParams(6, 3))
    C = normalized_connection(solve_q_system(F), F)
    assert C.M == run_pipeline(FanoParams(6, 3)).omega_hat.M
    assert assemble_lplus(solve_q_system(F)).at_q0() == PolyMatrix.identity(5)


def test_describe_lines(pipes):
    lines = pipes[(5, 4)].qsystem.describe()
    assert lines[0] == "Q_2^1 = diag_3(24)"
    assert lines[-1] == "Q_0^3 = diag_3(1109376)"
