import pytest

from rough_heston import ModelParams, default_params


@pytest.fixture(scope="session")
def fig1():
    """Reference parameter set: alpha=0.6, rho=-0.8, lam=2, xi=0.2."""
    return default_params()


@pytest.fixture(scope="session")
def fig1_mirror():
    """Same set with positive correlation, for upper-side computations."""
    return ModelParams(alpha=0.6, rho=0.8, lam=2.0, xi=0.2, vbar=0.04, v0=0.04)


def fig1_with_alpha(alpha):
    return ModelParams(alpha=alpha, rho=-0.8, lam=2.0, xi=0.2, vbar=0.04, v0=0.04)
