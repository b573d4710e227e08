import mpmath
import pytest

from apz.tables import load_golden
from apz.zeta_core import PrecisionContext


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext()


@pytest.fixture(scope="session")
def golden():
    """golden(name)[key] -> verbatim tabulated text."""
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = {row.key: row.text for row in load_golden(name)}
        return cache[name]

    return get


def rel(a, b):
    with mpmath.workdps(120):
        a, b = mpmath.mpf(a), mpmath.mpf(b)
        return abs(a - b) / max(abs(a), abs(b))


ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """report(label, ok, detail): one verdict line per acceptance criterion."""

    def add(label, ok, detail):
        line = f"{label}: {'PASS' if ok else 'FAIL'} ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return add


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
