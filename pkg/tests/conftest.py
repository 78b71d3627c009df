import pytest

from twisted_lambert.characters import build_character
from twisted_lambert.lfunctions import DirichletLSeries
from twisted_lambert.precision import PrecisionContext

CTX60 = PrecisionContext(60)
CTX40 = PrecisionContext(40)
CHI5_VALUES = [1, -1, -1, 1, 0]


@pytest.fixture(scope="session")
def ctx60():
    return CTX60


@pytest.fixture(scope="session")
def ctx40():
    return CTX40


@pytest.fixture(scope="session")
def chi5():
    return build_character(5, CHI5_VALUES)


@pytest.fixture(scope="session")
def zeta_series():
    return DirichletLSeries(build_character(1, "principal"), CTX60)


@pytest.fixture(scope="session")
def l5_series(chi5):
    return DirichletLSeries(chi5, CTX60)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        ok, detail = RESULTS[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
