import numpy as np
import pytest

from lorafer import LoRaParams


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=range(7, 13), ids=lambda sf: f"sf{sf}")
def params(request):
    return LoRaParams(request.param)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[key])
