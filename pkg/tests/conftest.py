import pytest

from heiscat.frobenius import builtin

ACCEPTANCE_LINES = []


@pytest.fixture(params=["trivial", "C2", "dual"])
def grid_algebra(request):
    return builtin(request.param)


@pytest.fixture
def kk():
    return builtin("trivial")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
