import pytest

from homolab.complex import Chain, build_complex
from homolab.suites import cycle_graph, full_simplex, projective_plane, sphere, torus


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: exhaustive checks over every input')


@pytest.fixture
def triangle():
    return full_simplex(2)


@pytest.fixture
def tetrahedron():
    return full_simplex(3)


@pytest.fixture
def hollow_tetrahedron():
    return sphere(2)


@pytest.fixture
def square():
    return cycle_graph(4)


@pytest.fixture
def rp2():
    return projective_plane()


@pytest.fixture
def seven_torus():
    return torus()


@pytest.fixture
def face_boundary():
    """Boundary of the triangle (0, 1, 2)."""
    return Chain.of((0, 1, 2)).boundary()


@pytest.fixture
def path():
    return build_complex([(0, 1), (1, 2)])
