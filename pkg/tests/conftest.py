import pytest

from polycentral import _backend

_ACCEPTANCE = []


@pytest.fixture(params=sorted(_backend.available_backends()))
def backend(request, monkeypatch):
    """Run the test once per kernel; algebras built inside the test use that kernel."""
    mod = _backend.available_backends()[request.param]
    monkeypatch.setattr(_backend, "Rewriter", mod.Rewriter)
    monkeypatch.setattr(_backend, "rref", mod.rref)
    return request.param


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
