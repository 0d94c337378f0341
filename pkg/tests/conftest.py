import sys

import numpy as np
import pytest

from optspeed.metric import MetricOperator, random_metric


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_state(rng, dim=2):
    return rng.normal(size=dim) + 1j * rng.normal(size=dim)


def random_hermitian(rng, dim):
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (A + A.conj().T)


def random_pd_metric(rng, dim=2, floor=1e-6) -> MetricOperator:
    return random_metric(rng, dim, floor)


SIGMA_Y = np.array([[0, -1j], [1j, 0]])
E1 = np.array([1.0, 0.0], dtype=complex)
E2 = np.array([0.0, 1.0], dtype=complex)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(module.RESULTS):
            terminalreporter.write_line(line)
