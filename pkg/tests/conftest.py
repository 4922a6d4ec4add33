import os

import pytest

from weightkit import linalg
from weightkit.complexes import Complex
from weightkit.linalg import ZZ, Matrix

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def pytest_configure(config):
    # every SNF, solve and kernel call re-checks itself during the tests
    linalg.set_checks(True)


@pytest.fixture
def torsion():
    """Z -(2)-> Z in degrees 0, 1."""
    return Complex.two_term(ZZ, 0, Matrix.from_rows(ZZ, [[2]]))


@pytest.fixture
def unit_cone():
    return Complex.two_term(ZZ, 0, Matrix.from_rows(ZZ, [[1]]))


@pytest.fixture
def z0():
    return Complex.concentrated(ZZ, 0, 1)
