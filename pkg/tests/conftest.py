import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def circle():
    return np.exp(2j * np.pi * np.arange(1024) / 1024)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
