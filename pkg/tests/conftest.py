import pytest
from hypothesis import settings

from stepswitch.model import Scenario

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


@pytest.fixture(scope="session")
def set_a():
    return Scenario(mass=0.067, E_q=0.3, V0_old=0.3, V0_new=0.8)


@pytest.fixture(scope="session")
def set_b():
    return Scenario(mass=0.042, E_q=0.04, V0_old=0.42, V0_new=0.62)


@pytest.fixture(scope="session")
def set_f5():
    return Scenario(mass=0.067, E_q=0.3, V0_old=0.8, V0_new=0.2)
