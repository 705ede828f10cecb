import numpy as np
import pytest

from cliffgr import checks, geometry, metricfile


def points(name: str, count: int, seed: int = 2024) -> np.ndarray:
    spec = metricfile.builtin(name)
    return checks.sample_points(spec, np.random.default_rng(seed), count)


@pytest.fixture(scope="session")
def schwarzschild_points():
    return points("schwarzschild", 20)


@pytest.fixture(scope="session")
def schwarzschild_snapshots(schwarzschild_points):
    spec = metricfile.builtin("schwarzschild")
    return [geometry.snapshot(spec, x, 3) for x in schwarzschild_points]


@pytest.fixture(scope="session")
def schw10():
    """Schwarzschild at r = 10 in the standard chart."""
    return geometry.snapshot(metricfile.builtin("schwarzschild"), [0.0, 10.0, 1.1, 0.3], 3)


@pytest.fixture(scope="session")
def frw():
    return geometry.snapshot(metricfile.builtin("frw"), [1.3, 0.2, 0.4, 0.1], 3)


@pytest.fixture(scope="session")
def minkowski():
    return geometry.snapshot(metricfile.builtin("minkowski"), [0.3, 1.0, -2.0, 0.5], 3)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("tests.test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
