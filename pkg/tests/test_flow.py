import itertools
from fractions import Fraction

import pytest

from homolab.complex import Chain, build_complex
from homolab.errors import ContainmentError, DomainError, MembershipError
from homolab.flow import (INFINITY, capacitance_bound, effective_capacitance,
                          effective_resistance, graph_resistance, is_null_homologous,
                          is_stationary, spectral_gap_transfer)
from homolab.suites import cycle_chain, run_suite


def test_resistance_of_single_face(triangle, face_boundary):
    result = effective_resistance(triangle, face_boundary)
    assert result.resistance == 1
    assert result.flow == Chain.of((0, 1, 2))


def test_resistance_splits_over_the_sphere(hollow_tetrahedron, face_boundary):
    result = effective_resistance(hollow_tetrahedron, face_boundary)
    assert result.resistance == Fraction(3, 4)
    assert result.flow.boundary() == face_boundary
    assert result.energy(hollow_tetrahedron) == Fraction(3, 4)
    assert is_stationary(hollow_tetrahedron, result)


def test_weighted_face():
    K = build_complex([(0, 1, 2)], {(0, 1, 2): 2})
    assert effective_resistance(K, Chain.of((0, 1, 2)).boundary()).resistance == Fraction(1, 2)


def test_float_backend_agrees(hollow_tetrahedron, face_boundary):
    result = effective_resistance(hollow_tetrahedron, face_boundary, backend='float')
    assert result.backend == 'float'
    assert result.resistance == pytest.approx(0.75)


def test_graph_case_matches_networkx(square):
    gamma = Chain.of((2,)) - Chain.of((0,))
    assert effective_resistance(square, gamma).resistance == 1
    assert graph_resistance(square, 0, 2) == pytest.approx(1.0)


def test_non_bounding_cycle(square):
    gamma = cycle_chain([0, 1, 2, 3])
    assert not is_null_homologous(square, gamma)
    result = effective_resistance(square, gamma)
    assert result.resistance is INFINITY
    assert not result.finite


def test_resistance_input_errors(triangle):
    with pytest.raises(DomainError):
        effective_resistance(triangle, Chain.of((0, 1)))
    with pytest.raises(MembershipError):
        effective_resistance(triangle, Chain.of((0, 1, 4)).boundary())
    with pytest.raises(DomainError):
        effective_resistance(triangle, Chain.of((0, 1, 2)).boundary(), backend='sparse')


def test_zero_cycle_has_zero_resistance(triangle):
    assert effective_resistance(triangle, Chain.zero(1)).resistance == 0


def test_capacitance_of_a_face(triangle, face_boundary):
    result = effective_capacitance(triangle.skeleton(1), triangle, face_boundary)
    assert result.capacitance == 1
    assert result.energy() == 1


def test_capacitance_with_two_faces_removed(hollow_tetrahedron, face_boundary):
    L = hollow_tetrahedron.without([(0, 1, 2), (0, 1, 3)])
    result = effective_capacitance(L, hollow_tetrahedron, face_boundary)
    assert result.capacitance == 2
    assert result.energy() == 2


def test_capacitance_is_infinite_when_gamma_bounds_in_L(hollow_tetrahedron, face_boundary):
    L = hollow_tetrahedron.without([(0, 1, 2)])
    assert effective_capacitance(L, hollow_tetrahedron, face_boundary).capacitance is INFINITY


def test_capacitance_is_finite_exactly_when_gamma_does_not_bound(hollow_tetrahedron, face_boundary):
    faces = hollow_tetrahedron.simplices(2)
    for r in range(len(faces) + 1):
        for removed in itertools.combinations(faces, r):
            L = hollow_tetrahedron.without(removed)
            result = effective_capacitance(L, hollow_tetrahedron, face_boundary)
            assert result.finite != is_null_homologous(L, face_boundary)


@pytest.mark.parametrize('t', [Fraction(-2), Fraction(-1, 2), Fraction(1, 3), Fraction(3)])
def test_perturbing_the_flow_along_the_void_costs_energy(hollow_tetrahedron, face_boundary, t):
    result = effective_resistance(hollow_tetrahedron, face_boundary)
    void = Chain(2, {(0, 1, 2): 1, (0, 1, 3): -1, (0, 2, 3): 1, (1, 2, 3): -1})
    perturbed = result.flow + void * t
    assert perturbed.boundary() == face_boundary
    assert perturbed.norm2() > result.flow.norm2() == result.resistance


def test_capacitance_errors(triangle, hollow_tetrahedron, face_boundary):
    graph = triangle.skeleton(1)
    with pytest.raises(DomainError):
        effective_capacitance(graph, graph, face_boundary)
    with pytest.raises(ContainmentError):
        effective_capacitance(hollow_tetrahedron, triangle, face_boundary)


def test_capacitance_bound(triangle):
    bound = capacitance_bound(triangle.skeleton(1), (0, 1, 2))
    assert bound.capacitance == 1
    assert bound.lambda_min == pytest.approx(3)
    assert bound.spectral_value == pytest.approx(1)


def test_spectral_gap_transfer(hollow_tetrahedron):
    transfer = spectral_gap_transfer(hollow_tetrahedron, 2)
    assert transfer.product == pytest.approx(1, abs=1e-7)
    assert transfer.cycle.norm2() == pytest.approx(1)


def test_flow_formulas_on_random_complexes():
    report = run_suite('flow', count=8, directions=5, capacitance_cases=2, seed=3)
    names = {c.name.split(' ')[0] for c in report.checks}
    assert {'optimality', 'capacitance'} <= names
    assert report.passed


@pytest.mark.slow
def test_flow_formulas():
    assert run_suite('flow').passed
