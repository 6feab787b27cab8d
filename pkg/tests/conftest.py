import pytest
from hypothesis import HealthCheck, settings

from hilbmodp.arith import FieldConfig

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def cfg():
    return FieldConfig(5, 3, 2)


@pytest.fixture(scope="session")
def cfg81():
    return FieldConfig(5, 3, 4)
