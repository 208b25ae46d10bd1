import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from homolab import settings
from homolab.complex import Chain, build_complex
from homolab.errors import DomainError, MalformedInputError, ResourceError
from homolab.flow import INFINITY
from homolab.span import (build_span_program, build_szegedy_workspace, fejer, oracle_models,
                          prepare_initial_state, simulate_evaluation, witness_bounds,
                          witness_sizes, witness_sizes_direct)
from homolab.suites import cycle_chain


@pytest.fixture
def face_program(triangle, face_boundary):
    return build_span_program(triangle, face_boundary)


@pytest.fixture
def sphere_program(hollow_tetrahedron, face_boundary):
    return build_span_program(hollow_tetrahedron, face_boundary)


def test_program_shape(sphere_program):
    assert sphere_program.d == 2
    assert sphere_program.size == 4
    assert sphere_program.operator().shape == (6, 4)
    assert sphere_program.evaluate([1, 0, 0, 0])
    assert sphere_program.evaluate([0, 1, 1, 1])
    assert not sphere_program.evaluate([0, 1, 1, 0])


def test_program_rejects_bad_targets(triangle):
    with pytest.raises(DomainError):
        build_span_program(triangle, Chain.of((0, 1)))
    with pytest.raises(DomainError):
        build_span_program(triangle, Chain.of((0, 1, 3)).boundary())


def test_input_validation(face_program):
    with pytest.raises(MalformedInputError):
        face_program.check_input([2])
    with pytest.raises(MalformedInputError):
        face_program.check_input([1, 0])


def test_witness_sizes_are_resistance_and_capacitance(sphere_program):
    assert witness_sizes(sphere_program, [1, 1, 1, 1]) == (Fraction(3, 4), INFINITY)
    assert witness_sizes(sphere_program, [1, 0, 0, 0]) == (1, INFINITY)
    assert witness_sizes(sphere_program, [0, 1, 1, 1]) == (3, INFINITY)
    assert witness_sizes(sphere_program, [0, 0, 0, 0]) == (INFINITY, Fraction(4, 3))


def test_direct_witness_sizes_agree(sphere_program):
    for x in itertools.product((0, 1), repeat=4):
        plus, minus = witness_sizes(sphere_program, x)
        fplus, fminus = witness_sizes_direct(sphere_program, x)
        if plus is INFINITY:
            assert fminus == pytest.approx(float(minus))
        else:
            assert fplus == pytest.approx(float(plus))


def test_witness_bounds(face_program, sphere_program):
    bounds = witness_bounds(face_program)
    assert (bounds.positive, bounds.negative, bounds.instances) == (1, 1, 2)
    assert bounds.query_bound == pytest.approx(1.0)
    bounds = witness_bounds(sphere_program)
    assert bounds.positive == 3
    assert bounds.instances == 16


def test_witness_bounds_refuse_large_programs():
    fan = build_complex([(0, i, i + 1) for i in range(1, 12)])
    program = build_span_program(fan, Chain.of((0, 1, 2)).boundary())
    assert program.size == 11
    with pytest.raises(ResourceError):
        witness_bounds(program)


def test_oracle_models(triangle):
    oracles = oracle_models(triangle)
    assert oracles.list(1, 0) == (0, 1)
    assert oracles.membership((0, 2))
    assert oracles.down_incidence((0, 1, 2), 1) == ((0, 2), -1)
    assert oracles.up_incidence((0, 1), 0) == (0, 1, 2)
    assert oracles.up_incidence((0, 1), 1) is None
    assert oracles.charge_superposition(5) == 3
    assert oracles.tally.incidence_queries == 3 + 3
    assert oracles.tally.list_queries == 1


def test_fejer_kernel():
    M = 16
    values = fejer([0.0, 2 * math.pi / M, math.pi], M)
    assert values[0] == pytest.approx(1.0)
    assert values[1] == pytest.approx(0.0, abs=1e-12)
    assert values[2] == pytest.approx(0.0, abs=1e-12)


def test_walk_workspace_on_a_face(triangle, face_boundary):
    workspace = build_szegedy_workspace(triangle, face_boundary)
    assert workspace.report.passed
    assert workspace.dimension == 3
    assert workspace.excluded == ()
    assert workspace.sigma_min == pytest.approx(1.0)


def test_walk_workspace_on_the_sphere(hollow_tetrahedron, face_boundary):
    workspace = build_szegedy_workspace(hollow_tetrahedron, face_boundary)
    assert workspace.dimension == 24
    assert {c.name for c in workspace.report.checks} == {
        'kernel', 'closed-form', 'phases', 'reflection', 'phase-gap'}
    np.testing.assert_allclose(np.abs(np.linalg.eigvals(workspace.U)), 1.0, atol=1e-9)


def test_walk_eigenphases_match_the_singular_values(hollow_tetrahedron, face_boundary):
    workspace = build_szegedy_workspace(hollow_tetrahedron, face_boundary)
    assert workspace.phase_residual <= 1e-9
    assert workspace.report.passed


def test_walk_respects_the_cap(monkeypatch, hollow_tetrahedron, face_boundary):
    monkeypatch.setattr(settings, 'span_cap', 2)
    with pytest.raises(ResourceError):
        build_szegedy_workspace(hollow_tetrahedron, face_boundary)


@pytest.mark.parametrize('fixture, R', [('triangle', 1), ('hollow_tetrahedron', Fraction(3, 4))])
def test_initial_state(request, face_boundary, fixture, R):
    state = prepare_initial_state(request.getfixturevalue(fixture), face_boundary)
    assert state.resistance == R
    assert state.extended_norm2 == R / (R + 1)
    assert state.norm2 == pytest.approx(float(R))


def test_initial_state_needs_a_boundary(square):
    with pytest.raises(DomainError):
        prepare_initial_state(square, cycle_chain([0, 1, 2, 3]))


def test_evaluation_on_a_face(face_program):
    positive = simulate_evaluation(face_program, [1], seed=0)
    negative = simulate_evaluation(face_program, [0], seed=0)
    assert positive.decision and not negative.decision
    assert positive.acceptance == pytest.approx(0.0, abs=1e-9)
    assert negative.acceptance == pytest.approx(1.0)
    assert positive.tally.precision_bits == 4
    assert positive.tally.input_queries == positive.tally.repetitions * 15 * 2


def test_evaluation_rejects_bad_budgets(face_program):
    with pytest.raises(DomainError):
        simulate_evaluation(face_program, [1], error_budget=1.5)


def test_zero_target_is_always_positive(triangle):
    program = build_span_program(triangle, Chain.zero(1))
    assert simulate_evaluation(program, [0]).decision


@pytest.mark.slow
def test_evaluation_matches_classical_on_the_sphere(sphere_program):
    bounds = witness_bounds(sphere_program)
    workspace = build_szegedy_workspace(sphere_program.K, sphere_program.gamma)
    for i, x in enumerate(itertools.product((0, 1), repeat=4)):
        result = simulate_evaluation(sphere_program, x, 1e-6, seed=i, bounds=bounds,
                                     workspace=workspace)
        assert result.decision == sphere_program.evaluate(x)
