import pytest

from covsat.cnf import parse_dimacs
from covsat.decomposition import decomposition_of_cnf

F1_TEXT = "p cnf 3 3\n1 -2 0\n2 3 0\n-1 -3 0\n"
FD_TEXT = "p cnf 2 3\n1 -2 0\n2 0\n-1 0\n"
FC_TEXT = "p cnf 2 3\n1 -2 0\n-1 2 0\n-1 0\n"


@pytest.fixture
def f1():
    return parse_dimacs(F1_TEXT)


@pytest.fixture
def fd():
    return parse_dimacs(FD_TEXT)


@pytest.fixture
def fc():
    return parse_dimacs(FC_TEXT)


@pytest.fixture
def d1(f1):
    return decomposition_of_cnf(f1)


@pytest.fixture
def dd(fd):
    return decomposition_of_cnf(fd)


@pytest.fixture
def dc(fc):
    return decomposition_of_cnf(fc)


@pytest.fixture
def cnf_files(tmp_path):
    paths = {}
    for name, text in (("F1", F1_TEXT), ("FD", FD_TEXT), ("FC", FC_TEXT)):
        p = tmp_path / f"{name}.cnf"
        p.write_text(text)
        paths[name] = p
    return paths


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
