import sys

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is not None and module.SUMMARY:
        terminalreporter.section("acceptance criteria")
        for line in module.SUMMARY:
            terminalreporter.write_line(line)
