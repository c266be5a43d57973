import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def m1_germ():
    from wcongruence.congruence import germ_from_derivatives

    return germ_from_derivatives({(1, 1): 1}, {(0, 2): -1, (2, 0): 2}, 9)
