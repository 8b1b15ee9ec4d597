import numpy as np
import pytest

from wallparticles.rng import NoiseStream


@pytest.fixture
def stream():
    return NoiseStream(20240601, 99)


@pytest.fixture
def np_rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = next((m for n, m in list(sys.modules.items()) if n.endswith("test_acceptance")), None)
    results = getattr(mod, "RESULTS", None)
    if results:
        out = [results[k] for k in sorted(results)]
        terminalreporter.section("acceptance criteria")
        for line in out:
            terminalreporter.write_line(line)
