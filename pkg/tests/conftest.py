import pytest

from varfields.catalog import base_point, named_variety


@pytest.fixture(scope="session")
def sphere():
    return named_variety("sphere")


@pytest.fixture(scope="session")
def circle():
    return named_variety("circle")


@pytest.fixture(scope="session")
def line():
    return named_variety("affine_line")


@pytest.fixture(scope="session")
def plane():
    return named_variety("affine_plane")


@pytest.fixture(scope="session")
def sphere_point(sphere):
    return base_point("sphere")


@pytest.fixture(scope="session")
def line_point(line):
    return base_point("affine_line")
