import pytest

from ifsx import IFS

ACCEPTANCE_LINES = []


def f5():
    return IFS.from_maps([("1/5", 0), ("1/5", "3/5"), ("1/5", "4/5")], osc="declared", name="F5")


def c4():
    return IFS.from_maps([("1/4", 0), ("1/4", "3/4")], name="C4")


def halves():
    return IFS.from_maps([("1/2", 0), ("1/2", "1/2")], osc="declared", name="H2")


@pytest.fixture
def F5():
    return f5()


@pytest.fixture
def C4():
    return c4()


@pytest.fixture
def H2():
    return halves()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
