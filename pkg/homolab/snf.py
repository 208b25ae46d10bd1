'''
Smith normal form over the integers, relative boundary matrices and the
torsion quantities that bound resistance and capacitance from above.
'''
import itertools
import logging
import math
import random
from dataclasses import dataclass, field

from . import settings
from .complex import SimplicialComplex, boundary_matrix
from .errors import DomainError, MembershipError

logger = logging.getLogger(__name__)


@dataclass
class SNFResult:
    diagonal: list
    shape: tuple
    operations: list = field(default=None, repr=False)

    @property
    def rank(self):
        return sum(1 for v in self.diagonal if v)

    @property
    def nullity(self):
        """Number of zero columns of the normal form."""
        return self.shape[1] - self.rank

    @property
    def torsion(self):
        return [v for v in self.diagonal if v > 1]

    @property
    def determinant(self):
        '''|det| of a square input, None otherwise.'''
        if self.shape[0] != self.shape[1]:
            return None
        return math.prod(self.diagonal) if self.rank == self.shape[0] else 0

    def to_dict(self):
        return {'diagonal': self.diagonal, 'rank': self.rank, 'shape': list(self.shape)}


def _smallest(A, cells):
    best = None
    for i, j in cells:
        v = A[i][j]
        if v and (best is None or abs(v) < abs(A[best[0]][best[1]])):
            best = (i, j)
    return best


def smith_normal_form(M, record=False):
    '''
    Diagonal d_1 | d_2 | ... of the Smith normal form of an integer matrix.

    Pivots are the smallest nonzero entry in absolute value. Entries are
    Python ints throughout. With ``record`` the elementary operations are
    kept as tuples ``(kind, target, source, multiple)``.
    '''
    A = [[int(v) for v in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    ops = [] if record else None

    def swap_rows(i, j):
        if i != j:
            A[i], A[j] = A[j], A[i]
            if record:
                ops.append(('swap-rows', i, j, 1))

    def swap_cols(i, j):
        if i != j:
            for row in A:
                row[i], row[j] = row[j], row[i]
            if record:
                ops.append(('swap-cols', i, j, 1))

    def add_row(target, source, q):
        A[target] = [a - q * b for a, b in zip(A[target], A[source])]
        if record:
            ops.append(('add-row', target, source, -q))

    def add_col(target, source, q):
        for row in A:
            row[target] -= q * row[source]
        if record:
            ops.append(('add-col', target, source, -q))

    for t in range(min(m, n)):
        pivot = _smallest(A, itertools.product(range(t, m), range(t, n)))
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // A[t][t])
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // A[t][t])
            cross = [(i, t) for i in range(t + 1, m)] + [(t, j) for j in range(t + 1, n)]
            leftover = _smallest(A, cross)
            if leftover is not None:
                # a remainder, strictly smaller than the pivot
                swap_rows(t, leftover[0])
                swap_cols(t, leftover[1])
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], -1)
        if A[t][t] < 0:
            A[t] = [-v for v in A[t]]
            if record:
                ops.append(('negate-row', t, t, -1))
    diagonal = [A[i][i] for i in range(min(m, n))]
    return SNFResult(diagonal, (m, n), ops)


def _selection(K, chosen, d):
    if chosen is None:
        return ()
    if isinstance(chosen, SimplicialComplex):
        return tuple(chosen.simplices(d))
    out = tuple(tuple(sorted(s)) for s in chosen)
    for s in out:
        if len(s) != d + 1:
            raise DomainError('{} is not a {}-simplex'.format(list(s), d))
        if s not in K:
            raise MembershipError('simplex {} not in complex'.format(list(s)))
    return out


def relative_boundary_matrix(K, L, L0, d):
    '''
    Columns of the d-simplices of ``L``, rows of the (d-1)-simplices of K
    that are not in ``L0``. ``L`` and ``L0`` may be complexes or simplex lists.
    '''
    columns = set(_selection(K, L, d))
    removed = set(_selection(K, L0, d - 1))
    if isinstance(L, SimplicialComplex) and not L.is_subcomplex_of(K):
        raise MembershipError('L has simplices outside the complex')
    if isinstance(L0, SimplicialComplex) and not L0.is_subcomplex_of(K):
        raise MembershipError('L0 has simplices outside the complex')
    return boundary_matrix(K, d).restrict(keep_row=lambda s: s not in removed,
                                          keep_col=lambda s: s in columns)


def torsion_cardinality(K, L, L0, d):
    """Order of the torsion of H_{d-1}(L, L0): product of the nonzero SNF diagonal."""
    op = relative_boundary_matrix(K, L, L0, d)
    if 0 in op.shape:
        return 1
    return math.prod(v for v in smith_normal_form(op.to_lists()).diagonal if v)


@dataclass
class TorsionReport:
    d: int
    n: int
    submatrices: int
    exhaustive: bool
    t_max: int
    max_pair: tuple
    hadamard_ok: bool
    resistance_bound: int
    capacitance_bound: int
    hadamard_bound: float
    resistance: object = None
    capacitance: object = None

    @property
    def label(self):
        return 'exact' if self.exhaustive else 'monte-carlo'

    @property
    def resistance_ok(self):
        if self.resistance is None:
            return None
        return self.resistance <= self.resistance_bound

    @property
    def capacitance_ok(self):
        if self.capacitance is None:
            return None
        return self.capacitance <= self.capacitance_bound

    def to_dict(self):
        return {
            'd': self.d, 'n': self.n, 'submatrices': self.submatrices,
            'estimate': self.label, 't_max': self.t_max,
            'max_pair': {'columns': [list(s) for s in self.max_pair[0]],
                         'rows': [list(s) for s in self.max_pair[1]]},
            'hadamard_ok': self.hadamard_ok, 'hadamard_bound': self.hadamard_bound,
            'resistance_bound': self.resistance_bound,
            'capacitance_bound': self.capacitance_bound,
            'resistance': None if self.resistance is None else str(self.resistance),
            'capacitance': None if self.capacitance is None else str(self.capacitance),
            'resistance_ok': self.resistance_ok, 'capacitance_ok': self.capacitance_ok,
        }


def count_square_submatrices(rows, cols):
    return sum(math.comb(rows, k) * math.comb(cols, k) for k in range(1, min(rows, cols) + 1))


def _square_submatrices(rows, cols, samples, rng):
    if samples is None:
        for k in range(1, min(rows, cols) + 1):
            for c in itertools.combinations(range(cols), k):
                for r in itertools.combinations(range(rows), k):
                    yield r, c
        return
    for _ in range(samples):
        k = rng.randint(1, min(rows, cols))
        yield tuple(sorted(rng.sample(range(rows), k))), tuple(sorted(rng.sample(range(cols), k)))


def bounds_report(K, d, samples=500, seed=0, resistance=None, capacitance=None):
    '''
    Largest torsion over square submatrices of the boundary of dimension d,
    and the upper bounds it gives: n^2 T^2 for the resistance of a unit
    cycle, n n_0 T^2 for capacitance and (d+1)^(n/2) for T itself.

    Submatrices are enumerated when there are at most
    ``settings.exhaustive_submatrices`` of them and sampled otherwise.
    '''
    if samples < 1:
        raise DomainError('sample count must be at least 1')
    op = boundary_matrix(K, d)
    rows, cols = op.shape
    n = min(rows, cols)
    full = op.to_lists()
    total = count_square_submatrices(rows, cols)
    exhaustive = total <= settings.exhaustive_submatrices
    rng = random.Random(seed)
    t_max, best, hadamard_ok = 1, ((), ()), True
    for r, c in _square_submatrices(rows, cols, None if exhaustive else samples, rng):
        sub = [[full[i][j] for j in c] for i in r]
        result = smith_normal_form(sub)
        t = math.prod(v for v in result.diagonal if v)
        det = result.determinant
        if det and det * det > (d + 1) ** len(c):
            hadamard_ok = False
            logger.warning('determinant %d above the Hadamard bound for size %d', det, len(c))
        if t > t_max:
            t_max = t
            best = (tuple(op.cols[j] for j in c), tuple(op.rows[i] for i in r))
    logger.info('T_max %s %d over %s submatrices', 'exact' if exhaustive else 'estimate',
                t_max, total if exhaustive else samples)
    return TorsionReport(
        d=d, n=n, submatrices=total if exhaustive else samples, exhaustive=exhaustive,
        t_max=t_max, max_pair=best, hadamard_ok=hadamard_ok,
        resistance_bound=n * n * t_max * t_max,
        capacitance_bound=n * K.n(0) * t_max * t_max,
        hadamard_bound=math.sqrt(d + 1) ** n,
        resistance=resistance, capacitance=capacitance)
