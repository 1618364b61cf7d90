import pytest
from hypothesis import settings

from lietorus import catalog
from lietorus.torus import build_multiloop

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def b3():
    s = catalog.b3_algebra()
    sigma = catalog.b3_tuple(s)
    h = catalog.b3_cartan(s)
    return s, sigma, h


@pytest.fixture(scope="session")
def b3_torus(b3):
    s, sigma, h = b3
    return build_multiloop(s, sigma, h)
