import sys
from pathlib import Path

import numpy as np
import pytest

from coverlab import full_simplex, symmetric_action, cyclic_action

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE = {}


@pytest.fixture
def triangle():
    return full_simplex(3)


@pytest.fixture
def tetra():
    return full_simplex(4)


@pytest.fixture
def z2():
    return symmetric_action(2)


@pytest.fixture
def sym3():
    return symmetric_action(3)


@pytest.fixture
def cyc4():
    return cyclic_action(4)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def building():
    from coverlab.lattice import subspace_lattice
    return subspace_lattice(2)


@pytest.fixture(scope="session")
def exact_scheme(building):
    from coverlab.lattice import gl_scheme
    return gl_scheme(building, "exact")


@pytest.fixture
def record():
    """Record an acceptance outcome: record(number, passed, detail)."""
    def _record(number, passed, detail=""):
        ACCEPTANCE[number] = (passed, detail)
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"AC{number:<2} {'PASS' if passed else 'FAIL'}  {detail}")
