import pytest

from homolab.collapse import (apply_collapses, find_collapse_pairs, greedy_collapse,
                              transport_chain)
from homolab.complex import Chain
from homolab.errors import DomainError
from homolab.families import resistance_family


def test_free_pairs_of_a_solid_tetrahedron(tetrahedron):
    pairs = find_collapse_pairs(tetrahedron)
    assert len(pairs) == 4
    assert all(sigma == (0, 1, 2, 3) for sigma, _ in pairs)


def test_hollow_sphere_has_no_free_faces(hollow_tetrahedron):
    assert find_collapse_pairs(hollow_tetrahedron) == []
    assert greedy_collapse(hollow_tetrahedron).pairs == []


def test_greedy_collapse_to_a_graph(tetrahedron):
    sequence = greedy_collapse(tetrahedron, target_dim=1)
    assert sequence.reached
    assert sequence.result.dim == 1
    assert sequence.to_dict()['reached'] is True


def test_collapsed_tetrahedron_is_a_tree(tetrahedron):
    L = greedy_collapse(tetrahedron, target_dim=1).result
    assert L.n(0) - L.n(1) == 1
    assert len(L.simplices(1)) == 3


def test_prescribed_sequence_and_transport(tetrahedron, face_boundary):
    sequence = apply_collapses(tetrahedron, [((0, 1, 2, 3), (0, 1, 2))])
    assert (0, 1, 2) not in sequence.result
    f = transport_chain(sequence, Chain.of((0, 1, 2)), face_boundary)
    assert f == Chain(2, {(1, 2, 3): 1, (0, 2, 3): -1, (0, 1, 3): 1})
    assert f.boundary() == face_boundary


def test_pair_that_is_not_free(tetrahedron):
    with pytest.raises(DomainError):
        apply_collapses(tetrahedron, [((0, 1, 2), (0, 1))])


def test_transport_needs_a_bounding_chain(tetrahedron, face_boundary):
    sequence = apply_collapses(tetrahedron, [((0, 1, 2, 3), (0, 1, 2))])
    with pytest.raises(DomainError):
        transport_chain(sequence, Chain.of((0, 1, 3)), face_boundary)


def test_protected_collapse_keeps_the_cycle():
    family = resistance_family(2, 1)
    sequence = greedy_collapse(family.K, protect=family.gamma.support())
    assert all(s in sequence.result for s in family.gamma.support())
    f = transport_chain(sequence, family.certificates['y'], family.gamma)
    assert f.boundary() == family.gamma
    assert all(s in sequence.result for s in f.support())
