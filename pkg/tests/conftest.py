import math

import pytest

from loopgas.braided import CategoryData
from loopgas.catalog import catalog_names, load_bundled

BUNDLED = catalog_names()
LOG2 = math.log(2)
PHI = (1 + math.sqrt(5)) / 2


def with_entry(data: CategoryData, table: str, key, value) -> CategoryData:
    """Copy of ``data`` with one F or R entry replaced."""
    F = dict(data.F)
    R = None if data.R is None else dict(data.R)
    (F if table == "F" else R)[key] = value
    return CategoryData(data.ring, F, R, name=data.name)


@pytest.fixture(params=BUNDLED)
def bundled(request) -> CategoryData:
    return load_bundled(request.param)


@pytest.fixture
def toric():
    return load_bundled("toric3d")


@pytest.fixture
def semion():
    return load_bundled("semion")


@pytest.fixture
def fib():
    return load_bundled("fibonacci")


@pytest.fixture
def ising():
    return load_bundled("ising-nu1")


_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion covered by a test")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, text = marker.args
    status = "PASS" if call.excinfo is None else "FAIL"
    previous = _ACCEPTANCE.get(number)
    if previous is None or status == "FAIL":
        _ACCEPTANCE[number] = (status, text)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        status, text = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {text}")
