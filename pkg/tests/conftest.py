import pytest

from nilflow.dynamics import TimeGrid, sech_squared_profile, variational_solutions
from nilflow.melnikov import melnikov_quadrature

STEP_SIZES = (0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125)


@pytest.fixture(scope="session")
def profile():
    return sech_squared_profile()


@pytest.fixture(scope="session")
def var_alpha1_pm12(profile):
    """Fundamental solutions for alpha=1 on [-12, 12]."""
    return variational_solutions(1.0, profile, TimeGrid(-12.0, 12.0, 1e-3))


@pytest.fixture(scope="session")
def var_alpha1_035(profile):
    """Fundamental solutions for alpha=1 on [0, 35]."""
    return variational_solutions(1.0, profile, TimeGrid(0.0, 35.0, 1e-3))


@pytest.fixture(scope="session")
def quadrature_rows(profile):
    """Quadrature results for the full halving sequence of step sizes."""
    return {h: melnikov_quadrature(1.0, profile, h=h, T=35.0) for h in STEP_SIZES}
