import pytest
from hypothesis import settings, strategies as st

from kmforge import catalog

settings.register_profile("kmforge", deadline=None, max_examples=60)
settings.load_profile("kmforge")

SMALL = [G.name for G in catalog.groups(24)]
TINY = [G.name for G in catalog.groups(16)]


def group_names(max_order=24):
    return st.sampled_from([G.name for G in catalog.groups(max_order)])


@pytest.fixture
def Q8():
    return catalog.get("Q8")


@pytest.fixture
def S3():
    return catalog.get("S3")
