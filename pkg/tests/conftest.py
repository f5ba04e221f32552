import sys
import warnings

import numpy as np
import pytest

from monolct.lct import ChirpSamplingWarning


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(autouse=True)
def _quiet_chirp_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ChirpSamplingWarning)
        yield


@pytest.fixture(params=["numba", "numpy"])
def backend(request, monkeypatch):
    """Run a test once per kernel backend."""
    monkeypatch.setenv("MONOLCT_NUMBA", "1" if request.param == "numba" else "0")
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "SUMMARY", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
