import pytest

from homolab.complex import Chain
from homolab.duality import (INFINITE, SIGMA, build_dual, check_duality, dual_homology_check,
                             dual_resistance, fundamental_cycle, partition_void)
from homolab.errors import DomainError
from homolab.flow import INFINITY
from homolab.suites import (cycle_chain, cycle_graph, duality_cases, duality_suite, sphere,
                            valid_subcomplexes)


@pytest.fixture
def sphere_dual():
    K = sphere(2)
    z = fundamental_cycle(K)
    return build_dual(K, [z], *partition_void(z, lambda s: s == (0, 1, 2)))


def test_fundamental_cycle_of_the_sphere(hollow_tetrahedron):
    z = fundamental_cycle(hollow_tetrahedron)
    assert z == Chain(2, {(0, 1, 2): 1, (0, 1, 3): -1, (0, 2, 3): 1, (1, 2, 3): -1})


def test_fundamental_cycle_of_the_square(square):
    assert fundamental_cycle(square) == cycle_chain([0, 1, 2, 3])


def test_fundamental_cycle_needs_one_void(square):
    with pytest.raises(DomainError):
        fundamental_cycle(square.disjoint_union(square))


def test_partition(hollow_tetrahedron):
    z = fundamental_cycle(hollow_tetrahedron)
    gamma1, gamma2, gamma = partition_void(z, lambda s: s == (0, 1, 2))
    assert gamma1 == Chain.of((0, 1, 2))
    assert gamma1 + gamma2 == z
    assert gamma2.boundary() == -gamma


def test_dual_incidence(sphere_dual):
    assert sphere_dual.vertices == ['s', 't', INFINITE]
    assert sphere_dual.incidence[(0, 1, 2)] == {'s': 1, INFINITE: -1}
    assert sphere_dual.incidence[(0, 1, 3)] == {'t': -1, INFINITE: 1}
    assert sphere_dual.incidence[SIGMA] == {'s': -1, 't': 1}
    assert dual_homology_check(sphere_dual)


def test_capacitance_equals_dual_resistance(sphere_dual, hollow_tetrahedron):
    L = hollow_tetrahedron.without([(0, 1, 2), (0, 1, 3)])
    result = check_duality(sphere_dual, L)
    assert result.passed
    assert result.capacitance == result.resistance == 2
    assert result.difference == 0
    assert result.to_dict()['passed'] is True


def test_disconnected_dual_is_infinite(sphere_dual, hollow_tetrahedron):
    L = hollow_tetrahedron.without([(0, 1, 3)])
    assert dual_resistance(sphere_dual, L)[0] is INFINITY


def test_duality_refuses_bounding_gamma(sphere_dual, hollow_tetrahedron):
    with pytest.raises(DomainError):
        check_duality(sphere_dual, hollow_tetrahedron)
    with pytest.raises(DomainError):
        check_duality(sphere_dual, hollow_tetrahedron.without([(0, 1, 3)]))


def test_build_dual_validates_the_partition(hollow_tetrahedron):
    z = fundamental_cycle(hollow_tetrahedron)
    gamma1, gamma2, gamma = partition_void(z, lambda s: s == (0, 1, 2))
    with pytest.raises(DomainError):
        build_dual(hollow_tetrahedron, [z], gamma1, gamma1, gamma)
    with pytest.raises(DomainError):
        build_dual(hollow_tetrahedron, [z], gamma1, gamma2, gamma, split=1)
    with pytest.raises(DomainError):
        build_dual(hollow_tetrahedron, [z, z], gamma1, gamma2, gamma)


def test_square_case():
    K = cycle_graph(4)
    z = fundamental_cycle(K)
    data = build_dual(K, [z], *partition_void(z, lambda s: s in ((0, 1), (1, 2))))
    L = K.without([(1, 2), (0, 3)])
    result = check_duality(data, L)
    assert result.passed
    assert result.capacitance == 2


def test_valid_subcomplex_counts():
    counts = {name: len(valid_subcomplexes(data)) for name, data in duality_cases()}
    assert counts['sphere'] == 7
    assert counts['square'] == 9


def test_duality_suite_sample():
    assert duality_suite(limit=3).passed
