import os
import sys
import warnings

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from digs import params as P  # noqa: E402


@pytest.fixture
def quiet():
    """Silence regime warnings for tests that deliberately leave the regime."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        yield


@pytest.fixture
def fig2():
    return P.preset("fig2-open")


@pytest.fixture
def fig3():
    return P.preset("fig3-closed")


@pytest.fixture
def fig6():
    return P.preset("fig6-dispersion")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.RESULTS:
        terminalreporter.write_line(line)
