import json
from pathlib import Path

import pytest

from fano_qc.banded import PolyMatrix, make_diag
from fano_qc.exact_core import parse_poly

GOLDEN = Path(__file__).parent / "golden"


def load_golden(name: str) -> dict:
    return json.loads((GOLDEN / name).read_text(encoding="utf-8"))


def golden_matrix(rows) -> PolyMatrix:
    return PolyMatrix([[parse_poly(x) for x in row] for row in rows])


def golden_diag(dim: int, band) -> PolyMatrix:
    n, values = band
    return make_diag(dim, n, [parse_poly(v) for v in values])


@pytest.fixture(scope="session")
def m7_5():
    return load_golden("m7_5.json")


@pytest.fixture(scope="session")
def m5_4():
    return load_golden("m5_4.json")


@pytest.fixture(scope="session")
def m5_3():
    return load_golden("m5_3.json")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
