'''
Exact rational linear algebra over QQ, backed by sympy's DomainMatrix.

Matrices are passed around as lists of rows of Fractions; conversion to and
from sympy happens only inside this module.
'''
from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def _qq(value):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def _fraction(element):
    return Fraction(int(element.p), int(element.q))


def to_domain(rows, ncols=None):
    m = len(rows)
    n = len(rows[0]) if rows else (ncols or 0)
    return DomainMatrix([[_qq(v) for v in row] for row in rows], (m, n), QQ)


def from_domain(matrix):
    return [[_fraction(v) for v in row] for row in matrix.to_Matrix().tolist()]


def rank(rows):
    if not rows or not rows[0]:
        return 0
    return to_domain(rows).rank()


def rref(rows, ncols=None):
    """Reduced row echelon form and pivot columns."""
    if not rows or not rows[0]:
        return [list(r) for r in rows], ()
    reduced, pivots = to_domain(rows).rref()
    return from_domain(reduced), tuple(pivots)


def nullspace(rows, ncols):
    """Basis of the right kernel of an m x ncols matrix."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    reduced, pivots = rref(rows)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -reduced[i][f]
        basis.append(v)
    return basis


def solve(rows, b):
    '''
    One solution of ``rows x = b``, free variables set to zero.
    Returns None when the system is inconsistent.
    '''
    m = len(rows)
    n = len(rows[0]) if rows else 0
    if m == 0:
        return [Fraction(0)] * n
    if n == 0:
        return [] if all(v == 0 for v in b) else None
    augmented = [list(row) + [b[i]] for i, row in enumerate(rows)]
    reduced, pivots = rref(augmented)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(pivots):
        x[p] = reduced[i][n]
    return x


def gram(columns, m, weights):
    '''
    A W A^T for A given as sparse columns ``{row: value}`` of height ``m``.
    '''
    out = [[Fraction(0)] * m for _ in range(m)]
    for column, w in zip(columns, weights):
        items = list(column.items())
        for i, a in items:
            for k, c in items:
                out[i][k] += w * a * c
    return out


def min_energy_solution(columns, m, b, weights):
    '''
    Minimise sum x_j^2 / w_j subject to A x = b.

    Solves (A W A^T) phi = b; the minimiser is x = W A^T phi and its energy is
    phi . b. Returns ``(x, energy)`` or None when b is not in the image of A.
    '''
    if not any(v != 0 for v in b):
        return [Fraction(0)] * len(columns), Fraction(0)
    phi = solve(gram(columns, m, weights), b)
    if phi is None:
        return None
    x = [w * sum((phi[i] * a for i, a in column.items()), Fraction(0))
         for column, w in zip(columns, weights)]
    energy = sum((p * v for p, v in zip(phi, b)), Fraction(0))
    return x, energy


def matvec(rows, x):
    return [sum((a * v for a, v in zip(row, x)), Fraction(0)) for row in rows]


def transpose(rows, ncols=None):
    n = len(rows[0]) if rows else (ncols or 0)
    return [[row[j] for row in rows] for j in range(n)]
