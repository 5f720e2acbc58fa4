import pytest
from hypothesis import HealthCheck, settings

from cylstokes import make_geometry

settings.register_profile("cylstokes", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("cylstokes")


@pytest.fixture(scope="session")
def g():
    return make_geometry(1.0, 1e-2, 1.0)


@pytest.fixture(scope="session")
def g3():
    return make_geometry(1.0, 1e-3, 1.0)
