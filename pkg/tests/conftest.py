import pytest

from belltest import CountsTable, EntangledPairState, ExperimentParams, SettingAngles

EXPER_ROW = (1523e3, 1694e3, 1069e3, 1153e3, 1191e3, 69.79e3)
QM_ROW = (1535e3, 1683e3, 1066e3, 1160e3, 1201e3, 12.25e3)

_acceptance_lines: list[str] = []


@pytest.fixture(scope="session")
def state():
    return EntangledPairState(0.297)


@pytest.fixture(scope="session")
def params():
    return ExperimentParams(24.2e6, 0.7377, 0.7859, 300.0)


@pytest.fixture(scope="session")
def settings():
    return SettingAngles(85.6, 118.0, -5.4, 25.9)


@pytest.fixture(scope="session")
def exper_table():
    return CountsTable.from_array(EXPER_ROW, observed=True)


@pytest.fixture(scope="session")
def qm_table():
    return CountsTable.from_array(QM_ROW)


@pytest.fixture
def criterion():
    """Record one acceptance line, then assert it."""

    def check(name: str, ok: bool, detail: str = ""):
        line = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else "")
        _acceptance_lines.append(line)
        print(line)
        assert ok, line

    return check


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
