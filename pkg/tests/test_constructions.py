import pytest

from homolab.complex import Chain, build_complex
from homolab.constructions import (cone, prism, pushforward, stellar_prism,
                                   stellar_subdivision, verify_chain_maps)
from homolab.errors import DomainError
from homolab.suites import full_simplex


def test_prism_of_a_triangle(triangle):
    construction = prism(triangle)
    assert construction.offset == 3
    assert construction.complex.n(3) == 3
    P = construction.maps['P']
    x = Chain.of((0, 1))
    assert P(x) == Chain(2, {(0, 3, 4): 1, (0, 1, 4): -1})


def test_stellar_subdivision_top_cells(triangle):
    construction = stellar_subdivision(triangle)
    assert construction.complex.n(2) == 3
    assert construction.apexes == {(0, 1, 2): 3}
    S = construction.maps['S']
    assert S(Chain.of((0, 1, 2))).boundary() == Chain.of((0, 1, 2)).boundary()


@pytest.mark.parametrize('K, top', [
    (build_complex([(0, 1), (1, 2), (0, 2)]), 9),
    (build_complex([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]), 28),
])
def test_stellar_prism_top_cells(K, top):
    assert stellar_prism(K).complex.n(K.dim + 1) == top


@pytest.mark.parametrize('d', [1, 2, 3])
def test_chain_map_identities_on_simplices(d):
    assert verify_chain_maps(full_simplex(d)).passed


def test_pushforward_signs_and_degeneracy():
    assert pushforward(Chain.of((0, 1)), {0: 2}) == -Chain.of((1, 2))
    assert pushforward(Chain.of((0, 1)), {1: 0}).is_zero()


def test_cone():
    assert cone(Chain.of((1, 2)), 0) == Chain.of((0, 1, 2))
    assert cone(Chain.of((1, 2)), 3) == Chain.of((1, 2, 3))
    with pytest.raises(DomainError):
        cone(Chain.of((0, 1)), 0)


def test_chain_map_matrix(triangle):
    construction = prism(triangle)
    M = construction.maps['P'].matrix(triangle, construction.complex, 0)
    assert M.shape == (construction.complex.n(1), 3)
    assert abs(M).sum() == 3


def test_constructions_need_pure_complexes():
    mixed = build_complex([(0, 1, 2), (3, 4)])
    with pytest.raises(DomainError):
        stellar_subdivision(mixed)
