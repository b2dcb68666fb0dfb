import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from wildgoppa.field import FieldTower
from wildgoppa.rng import make_rng

settings.register_profile(
    "default", max_examples=200, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

SMALL_Q = (4, 5, 7, 8, 9)

# Acceptance lines collected during the run and echoed in the terminal summary.
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session", params=SMALL_Q)
def tower(request) -> FieldTower:
    return FieldTower.get(request.param)


@pytest.fixture
def rng():
    return make_rng(12345, "tests")


def random_support(tower, n, rng):
    return rng.choice(tower.ext.order, size=n, replace=False).astype(np.int64)
