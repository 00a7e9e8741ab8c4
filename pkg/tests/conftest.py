import random

import pytest
from hypothesis import settings

from ncdg.fleet import bundled

settings.register_profile("ncdg", max_examples=40, deadline=None, derandomize=True)
settings.load_profile("ncdg")


@pytest.fixture(scope="session")
def M2():
    return bundled("M2")


@pytest.fixture(scope="session")
def M3():
    return bundled("M3")


@pytest.fixture(scope="session")
def CC():
    return bundled("CC")


@pytest.fixture
def rng(request):
    return random.Random(f"test:{request.node.name}")
