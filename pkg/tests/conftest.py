import pytest

from cutbirth.core.criticality import find_critical_temperature
from cutbirth.core.equilibrium import Potential, solve_endpoints


@pytest.fixture(scope="session")
def gaussian():
    return Potential.from_preset("gaussian")


@pytest.fixture(scope="session")
def birth_demo():
    return Potential.from_preset("birth-demo")


@pytest.fixture(scope="session")
def semicircle(gaussian):
    """One-cut Gaussian solution at T = 1, supported on (-2, 2)."""
    return solve_endpoints(gaussian, 1.0, 1)


@pytest.fixture(scope="session")
def birth_critical(birth_demo):
    return find_critical_temperature(birth_demo, (0.05, 5.0))


@pytest.fixture(scope="session")
def even_sextic():
    return Potential((0.0, 0.0, 1.0, 0.0, 0.5, 0.0, 0.2))
