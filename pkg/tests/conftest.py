import numpy as np
import pytest

from _spaces import ACCEPTANCE, corpus


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture(scope="session")
def spaces():
    return corpus()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split("]")[0].split()[-1])):
            terminalreporter.write_line(line)
