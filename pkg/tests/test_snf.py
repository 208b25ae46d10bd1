import math
import random

import pytest
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_form as sympy_smith_normal_form

from homolab import settings

from homolab.complex import boundary_matrix
from homolab.errors import DomainError, MembershipError
from homolab.flow import effective_resistance
from homolab.snf import (bounds_report, count_square_submatrices, relative_boundary_matrix,
                         smith_normal_form, torsion_cardinality)


def test_small_matrix():
    result = smith_normal_form([[2, 4], [6, 8]])
    assert result.diagonal == [2, 4]
    assert result.torsion == [2, 4]
    assert result.determinant == 8


def test_rectangular_and_singular():
    result = smith_normal_form([[1, 2, 3], [2, 4, 6]])
    assert result.diagonal == [1, 0]
    assert result.rank == 1
    assert result.nullity == 2
    assert result.determinant is None


def test_remainder_pivoting():
    result = smith_normal_form([[4, 6], [6, 9]])
    # det 0, gcd of entries 1
    assert result.diagonal == [1, 0]


def test_divisibility_chain():
    result = smith_normal_form([[2, 0, 0], [0, 3, 0], [0, 0, 4]])
    assert result.diagonal == [1, 2, 12]


def test_recorded_operations():
    result = smith_normal_form([[0, 2], [3, 0]], record=True)
    assert result.diagonal == [1, 6]
    assert result.operations


def test_projective_plane_torsion(rp2):
    result = smith_normal_form(boundary_matrix(rp2, 2).to_lists())
    assert result.torsion == [2]
    assert torsion_cardinality(rp2, rp2, None, 2) == 2


def test_torus_has_no_torsion(seven_torus):
    assert torsion_cardinality(seven_torus, seven_torus, None, 2) == 1


def test_relative_matrix_drops_rows(triangle):
    op = relative_boundary_matrix(triangle, triangle, [(0, 1)], 2)
    assert op.shape == (2, 1)
    with pytest.raises(DomainError):
        relative_boundary_matrix(triangle, triangle, [(0, 1, 2)], 2)
    with pytest.raises(MembershipError):
        relative_boundary_matrix(triangle, [(0, 1, 3)], None, 2)


def test_square_submatrix_count():
    assert count_square_submatrices(2, 2) == 4 + 1
    assert count_square_submatrices(3, 1) == 3


def test_bounds_report_on_sphere(hollow_tetrahedron):
    report = bounds_report(hollow_tetrahedron, 2, seed=0)
    assert report.exhaustive
    assert report.hadamard_ok
    assert report.t_max >= 1
    assert report.hadamard_bound == pytest.approx(math.sqrt(3) ** 4)
    assert report.resistance_bound == 16 * report.t_max ** 2


def test_bounds_report_checks_resistance(triangle, face_boundary):
    R = effective_resistance(triangle, face_boundary).resistance
    report = bounds_report(triangle, 2, resistance=R)
    assert report.resistance_ok
    assert report.to_dict()['estimate'] == 'exact'


def test_agrees_with_sympy_up_to_twelve_by_twelve():
    rng = random.Random(7)
    for _ in range(30):
        m, n = rng.randint(1, 12), rng.randint(1, 12)
        rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)]
        expected = sympy_smith_normal_form(
            DomainMatrix([[ZZ(v) for v in row] for row in rows], (m, n), ZZ)).to_Matrix()
        diagonal = sorted((abs(int(expected[i, i])) for i in range(min(m, n))),
                          key=lambda v: (v == 0, v))
        assert smith_normal_form(rows).diagonal == diagonal


def test_sampled_bounds_are_reproducible(monkeypatch, seven_torus):
    monkeypatch.setattr(settings, 'exhaustive_submatrices', 1)
    first = bounds_report(seven_torus, 2, samples=50)
    second = bounds_report(seven_torus, 2, samples=50)
    assert not first.exhaustive
    assert first.to_dict() == second.to_dict()
