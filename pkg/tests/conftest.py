import pytest

from serj import SystemParams
from serj._accel import HAVE_NUMBA

_ACCEPTANCE = {}


@pytest.fixture
def ref():
    """Reference parameter set (14-bit converters, theta=1e-6, eps=0.1)."""
    return SystemParams()


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    if request.param == "numba" and not HAVE_NUMBA:
        pytest.skip("numba not installed")
    return request.param


@pytest.fixture
def criterion(request):
    """Record a named acceptance criterion; the summary prints one line per criterion."""
    name = request.node.get_closest_marker("criterion").args[0]
    notes = []
    _ACCEPTANCE[name] = ("FAIL", notes)
    yield notes
    rep = getattr(request.node, "rep_call", None)
    _ACCEPTANCE[name] = ("PASS" if rep is not None and rep.passed else "FAIL", notes)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda s: int(s.split(".")[0])):
        status, notes = _ACCEPTANCE[name]
        detail = f"  ({'; '.join(notes)})" if notes else ""
        terminalreporter.write_line(f"{status}  {name}{detail}")
