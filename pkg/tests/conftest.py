import pytest

from localix.scenario import parse_scenario


def _load(name):
    return parse_scenario(f"builtin:{name}")


@pytest.fixture(scope="session")
def dual():
    return _load("dual-numbers")


@pytest.fixture(scope="session")
def upper():
    return _load("upper-triangular")


@pytest.fixture(scope="session")
def z4():
    return _load("z4")


@pytest.fixture(scope="session")
def f2xf2():
    return _load("f2xf2")


@pytest.fixture(scope="session")
def builtins(dual, upper, z4, f2xf2):
    return [dual, upper, z4, f2xf2]


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import VERDICTS

    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[number])
