from fractions import Fraction

import numpy as np
import pytest

from homolab.complex import (Chain, SimplicialComplex, boundary_matrix, build_complex,
                             coboundary_matrix, facets, is_cycle, orient, simplex)
from homolab.errors import DomainError, MalformedInputError, MembershipError


def test_simplex_canonical_form():
    assert simplex([2, 0, 1]) == (0, 1, 2)
    assert simplex('3,1') == (1, 3)
    with pytest.raises(MalformedInputError):
        simplex([1, 1])
    with pytest.raises(MalformedInputError):
        simplex([-1, 2])


def test_orient_sign():
    assert orient([1, 0, 2]) == ((0, 1, 2), -1)
    assert orient([2, 0, 1]) == ((0, 1, 2), 1)
    assert orient([0, 0]) == (None, 0)


def test_facets_alternate():
    assert facets((0, 1, 2)) == [((1, 2), 1), ((0, 2), -1), ((0, 1), 1)]


def test_closure_counts(tetrahedron, hollow_tetrahedron):
    assert tetrahedron.counts() == [4, 6, 4, 1]
    assert hollow_tetrahedron.counts() == [4, 6, 4]
    assert hollow_tetrahedron.is_pure()
    assert hollow_tetrahedron.is_subcomplex_of(tetrahedron)


def test_boundary_squares_to_zero(tetrahedron):
    for d in (2, 3):
        product = boundary_matrix(tetrahedron, d - 1).dense() @ boundary_matrix(tetrahedron, d).dense()
        assert not product.any()


def test_boundary_above_top_dimension_is_empty(triangle):
    op = boundary_matrix(triangle, 3)
    assert op.shape == (1, 0)
    with pytest.raises(DomainError):
        boundary_matrix(triangle, 4)


def test_coboundary_is_transpose(triangle):
    np.testing.assert_array_equal(coboundary_matrix(triangle, 1).dense(),
                                  boundary_matrix(triangle, 2).dense().T)


def test_chain_arithmetic(face_boundary):
    assert face_boundary == Chain(1, {(1, 2): 1, (0, 2): -1, (0, 1): 1})
    assert face_boundary.norm2() == 3
    assert is_cycle(face_boundary)
    assert (face_boundary - face_boundary).is_zero()
    half = face_boundary / 2
    assert half[(0, 2)] == Fraction(-1, 2)


def test_chain_rejects_mixed_dimensions():
    with pytest.raises(MalformedInputError):
        Chain.of((0, 1)) + Chain.of((0, 1, 2))
    with pytest.raises(MalformedInputError):
        Chain(1, {(0, 1, 2): 1})


def test_weights_default_and_validation(triangle):
    K = build_complex([(0, 1, 2)], {(0, 1): '1/2'})
    assert K.weight((0, 1)) == Fraction(1, 2)
    assert K.weight((1, 2)) == 1
    with pytest.raises(MembershipError):
        build_complex([(0, 1)], {(0, 2): 1})
    with pytest.raises(DomainError):
        build_complex([(0, 1)], {(0, 1): 0})


def test_without_removes_cofaces(tetrahedron):
    K = tetrahedron.without([(0, 1)])
    assert (0, 1) not in K
    assert (0, 1, 2) not in K and (0, 1, 2, 3) not in K
    assert (0, 2, 3) in K


def test_disjoint_union_shifts_vertices(triangle):
    K = triangle.disjoint_union(triangle)
    assert K.counts() == [6, 6, 2]
    assert (3, 4, 5) in K


def test_cofaces_and_degree(hollow_tetrahedron):
    assert hollow_tetrahedron.cofaces((0, 1)) == [(0, 1, 2), (0, 1, 3)]
    assert hollow_tetrahedron.degree((0, 1)) == 2


def test_empty_complex():
    K = SimplicialComplex()
    assert K.dim == -1
    assert K.counts() == []
