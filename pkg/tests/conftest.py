import numpy as np
import pytest

from vdwplate.eigensolver import GridCylSpec


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance criterion verdicts past pytest's output capture."""
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULT_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(test_acceptance.RESULT_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


@pytest.fixture(scope="session")
def coarse_spec():
    """Small, fast 2D grid for unit tests (production runs use the defaults)."""
    return GridCylSpec(h_target=0.25, l_xi_plus=16.0, l_rho=16.0)


def random_unit_vectors(rng, n):
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)
