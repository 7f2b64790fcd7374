import pytest

from lebmaps.datasets import (
    make_doubling_map,
    make_doubling_spec,
    make_nonpreserving_map,
    make_sine_spec,
    make_tripling_map,
    make_tripling_spec,
)
from lebmaps.extension import assemble_circle_map


@pytest.fixture
def doubling():
    return make_doubling_map()


@pytest.fixture
def tripling():
    return make_tripling_map()


@pytest.fixture
def doubling_spec():
    return make_doubling_spec()


@pytest.fixture
def tripling_spec():
    return make_tripling_spec()


@pytest.fixture
def sine_spec():
    return make_sine_spec()


@pytest.fixture(scope="session")
def sine_map():
    return assemble_circle_map(make_sine_spec())


@pytest.fixture
def nonpreserving():
    return make_nonpreserving_map()
