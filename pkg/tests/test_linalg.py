from fractions import Fraction

from homolab import linalg


def test_rank_and_nullspace():
    rows = [[1, 2, 3], [2, 4, 6]]
    assert linalg.rank(rows) == 1
    basis = linalg.nullspace(rows, 3)
    assert len(basis) == 2
    for v in basis:
        assert linalg.matvec(rows, v) == [0, 0]


def test_solve_consistent_and_inconsistent():
    rows = [[1, 1], [1, -1]]
    assert linalg.solve(rows, [Fraction(3), Fraction(1)]) == [2, 1]
    assert linalg.solve([[1, 1], [2, 2]], [1, 3]) is None


def test_min_energy_solution_splits_over_parallel_columns():
    # two parallel unit columns carrying b = 1
    x, energy = linalg.min_energy_solution([{0: 1}, {0: 1}], 1, [Fraction(1)], [1, 1])
    assert x == [Fraction(1, 2), Fraction(1, 2)]
    assert energy == Fraction(1, 2)


def test_min_energy_solution_respects_weights():
    x, energy = linalg.min_energy_solution([{0: 1}, {0: 1}], 1, [Fraction(1)],
                                           [Fraction(1), Fraction(3)])
    assert x == [Fraction(1, 4), Fraction(3, 4)]
    assert energy == Fraction(1, 4)


def test_min_energy_solution_outside_image():
    assert linalg.min_energy_solution([{0: 1}], 2, [Fraction(0), Fraction(1)], [1]) is None
