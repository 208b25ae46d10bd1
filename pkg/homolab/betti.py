'''
Betti numbers by matrix reduction and by the incremental algorithm, which adds
simplices one at a time and asks a null-homology tester whether each new
boundary was already a boundary.
'''
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .complex import Chain, SimplicialComplex
from .errors import DomainError, ResourceError
from .flow import is_null_homologous

logger = logging.getLogger(__name__)

TESTERS = ('classical-exact', 'classical-float', 'span-sim')


def _low(column):
    return max(column) if column else None


def reduced_rank(K, d):
    '''
    Rank of the boundary of dimension ``d`` by left-to-right column reduction
    over the rationals; a column is reduced by the earlier column sharing its
    lowest nonzero row until it is zero or its low is new.
    '''
    if d < 1 or d > K.dim:
        return 0
    index = {s: i for i, s in enumerate(K.simplices(d - 1))}
    pivots = {}
    for s in K.simplices(d):
        column = {}
        for j, v in enumerate(s):
            column[index[s[:j] + s[j + 1:]]] = Fraction(-1 if j % 2 else 1)
        low = _low(column)
        while low is not None and low in pivots:
            other = pivots[low]
            factor = column[low] / other[low]
            for i, v in other.items():
                value = column.get(i, 0) - factor * v
                if value:
                    column[i] = value
                else:
                    column.pop(i, None)
            low = _low(column)
        if low is not None:
            pivots[low] = column
    return len(pivots)


def matrix_reduction_betti(K, d):
    """beta_d = dim ker d_d - rank d_{d+1} with exact arithmetic."""
    if d < 0 or d > K.dim:
        raise DomainError('Betti dimension {} outside [0, {}]'.format(d, K.dim))
    return K.n(d) - reduced_rank(K, d) - reduced_rank(K, d + 1)


@dataclass
class Step:
    simplex: tuple
    null_homologous: bool
    dim: int = 0

    @property
    def change(self):
        if len(self.simplex) - 1 == self.dim:
            return 1 if self.null_homologous else 0
        return 0 if self.null_homologous else -1


@dataclass
class BettiRun:
    d: int
    tester: str
    order: list
    steps: list = field(default_factory=list)
    invocations: int = 0
    queries: int = None

    @property
    def betti(self):
        return sum(step.change for step in self.steps)

    @property
    def complete(self):
        return len(self.steps) == len(self.order)

    def to_dict(self):
        return {
            'd': self.d,
            'tester': self.tester,
            'betti': self.betti if self.complete else None,
            'complete': self.complete,
            'invocations': self.invocations,
            'queries': self.queries,
            'steps': [{'simplex': list(s.simplex), 'null_homologous': s.null_homologous}
                      for s in self.steps],
        }


class ClassicalTester:
    '''
    Null-homology by solving for a bounding chain, exactly or in floating point.
    '''

    def __init__(self, backend='exact'):
        self.backend = backend
        self.name = 'classical-' + backend
        self.invocations = 0
        self.queries = None

    def __call__(self, prefix, gamma):
        self.invocations += 1
        return is_null_homologous(prefix, gamma, backend=self.backend)


def make_tester(name, **options):
    if name == 'classical-exact':
        return ClassicalTester('exact')
    if name == 'classical-float':
        return ClassicalTester('float')
    if name == 'span-sim':
        from .span import SpanSimTester
        return SpanSimTester(**options)
    raise DomainError('unknown tester {!r}, expected one of {}'.format(name, TESTERS))


def insertion_order(K, d, order=None, seed=None):
    '''
    Simplices of dimension d then d+1. ``order`` fixes it explicitly, ``seed``
    shuffles each dimension; otherwise the canonical order is used.
    '''
    lower, upper = list(K.simplices(d)), list(K.simplices(d + 1))
    if order is not None:
        order = [tuple(s) for s in order]
        head = [s for s in order if len(s) == d + 1]
        tail = [s for s in order if len(s) == d + 2]
        if sorted(head) != lower or sorted(tail) != upper or len(order) != len(head) + len(tail):
            raise DomainError('order is not a permutation of the {}- and {}-simplices'.format(d, d + 1))
        return head + tail
    if seed is not None:
        rng = random.Random(seed)
        rng.shuffle(lower)
        rng.shuffle(upper)
    return lower + upper


def incremental_betti(K, d, tester='classical-exact', order=None, seed=None):
    '''
    The d-th Betti number by the incremental algorithm.

    Each d-simplex whose boundary is already a boundary of the prefix adds one;
    each (d+1)-simplex whose boundary is not yet a boundary subtracts one. The
    tester is called with the prefix complex and the boundary being tested.
    A tester that runs out of resources aborts the run; the ResourceError then
    carries the partial BettiRun.
    '''
    if d < 0 or d > K.dim:
        raise DomainError('Betti dimension {} outside [0, {}]'.format(d, K.dim))
    if isinstance(tester, str):
        tester = make_tester(tester)
    sequence = insertion_order(K, d, order, seed)
    run = BettiRun(d, tester.name, sequence)
    prefix = set(K.skeleton(d - 1).all_simplices()) if d > 0 else set()
    weights = K.weight_map()
    for s in sequence:
        gamma = Chain.of(s).boundary()
        current = SimplicialComplex(prefix, {t: w for t, w in weights.items() if t in prefix})
        try:
            result = tester(current, gamma)
        except ResourceError as e:
            run.invocations = tester.invocations
            logger.warning('tester %s stopped after %d of %d steps', tester.name,
                           len(run.steps), len(sequence))
            raise ResourceError(str(e), partial=run) from e
        run.steps.append(Step(s, bool(result), d))
        prefix.add(s)
    run.invocations = tester.invocations
    run.queries = tester.queries
    logger.info('beta_%d = %d by %s over %d steps', d, run.betti, tester.name, len(run.steps))
    return run
