import pytest

from finitopos.fincat import opens_category
from finitopos.finspace import d3, discrete, sierpinski


@pytest.fixture
def D3():
    return d3()


@pytest.fixture
def S():
    return sierpinski()


@pytest.fixture
def D2():
    return discrete(["x", "y"])


@pytest.fixture
def fixture_spaces():
    return [sierpinski(), d3(), discrete(["x", "y"])]


@pytest.fixture
def opens_of():
    return opens_category
