import pytest

from torelli.homs import Signs, calibrate_delta, calibrate_epsilon


@pytest.fixture(scope="session")
def signs() -> Signs:
    # calibration runs once, before any comparison test uses the signs
    epsilon = calibrate_epsilon(2, seed=0)
    delta = calibrate_delta(epsilon, 2)
    return Signs(epsilon, delta)
