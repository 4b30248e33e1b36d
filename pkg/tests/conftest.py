import numpy as np
import pytest

from stateffect.dist import Dist, pair_label


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def correlated():
    """Half mass on (a,0), half on (b,1)."""
    return Dist((pair_label("a", "0"), pair_label("b", "1")), [0.5, 0.5])


def bell_vector():
    return np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.summary_lines():
        terminalreporter.write_line(line)
