'''
Weighted simplicial complexes, chains and integral boundary operators.

Simplices are sorted tuples of non-negative vertex ids and are oriented by
that order. Every complex stores its simplices per dimension in lexicographic
order; that order indexes the rows and columns of every matrix built from it.
'''
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np
import scipy.sparse as sp

from .errors import DomainError, MalformedInputError, MembershipError

logger = logging.getLogger(__name__)


def simplex(vertices):
    """Return the canonical form of ``vertices``: a sorted tuple of ids."""
    if isinstance(vertices, str):
        vertices = [v for v in vertices.split(',') if v.strip()]
    try:
        vs = tuple(sorted(int(v) for v in vertices))
    except (TypeError, ValueError):
        raise MalformedInputError(
            'simplex vertices must be integers, got {!r}'.format(vertices)) from None
    if len(set(vs)) != len(vs):
        raise MalformedInputError(
            'duplicate vertex in simplex {}'.format(list(vs)))
    if vs and vs[0] < 0:
        raise MalformedInputError(
            'negative vertex id in simplex {}'.format(list(vs)))
    return vs


def orient(vertices):
    """Sort an ordered vertex list.

    Returns ``(simplex, sign)`` where ``sign`` is the parity of the sorting
    permutation, or ``(None, 0)`` if a vertex repeats (degenerate image).
    """
    vs = list(vertices)
    if len(set(vs)) != len(vs):
        return None, 0
    sign = 1
    for i in range(1, len(vs)):
        j = i
        while j > 0 and vs[j - 1] > vs[j]:
            vs[j - 1], vs[j] = vs[j], vs[j - 1]
            sign = -sign
            j -= 1
    return tuple(vs), sign


def facets(s):
    """Signed codimension-one faces: ``(s minus s[j], (-1)**j)``."""
    if len(s) < 2:
        return []
    return [(s[:j] + s[j + 1:], -1 if j % 2 else 1) for j in range(len(s))]


def _scalar(value, exact):
    if exact:
        if isinstance(value, float):
            raise MalformedInputError(
                'float coefficient {} in an exact chain'.format(value))
        return Fraction(value)
    return float(value)


class Chain:
    '''
    Sparse formal sum of oriented simplices of one dimension.

    Exact chains carry ``Fraction`` coefficients, float chains carry floats.
    Zero coefficients are never stored.
    '''

    __slots__ = ('dim', 'exact', '_coefficients')

    def __init__(self, dim, coefficients=None, exact=True):
        self.dim = dim
        self.exact = exact
        acc = {}
        for s, c in (coefficients or {}).items():
            s = simplex(s)
            if len(s) != dim + 1:
                raise MalformedInputError(
                    'simplex {} in a {}-chain'.format(list(s), dim))
            acc[s] = acc.get(s, 0) + _scalar(c, exact)
        self._coefficients = {s: c for s, c in acc.items() if c != 0}

    @classmethod
    def of(cls, s, coefficient=1, exact=True):
        s = simplex(s)
        return cls(len(s) - 1, {s: coefficient}, exact=exact)

    @classmethod
    def zero(cls, dim, exact=True):
        return cls(dim, exact=exact)

    @classmethod
    def from_vector(cls, dim, basis, values, exact=True):
        return cls(dim, {s: v for s, v in zip(basis, values) if v != 0},
                   exact=exact)

    def __getitem__(self, s):
        return self._coefficients.get(simplex(s), Fraction(0) if self.exact else 0.0)

    def __iter__(self):
        return iter(sorted(self._coefficients.items()))

    def items(self):
        return sorted(self._coefficients.items())

    def support(self):
        return sorted(self._coefficients)

    def __len__(self):
        return len(self._coefficients)

    def is_zero(self):
        return not self._coefficients

    def _combine(self, other, factor):
        if not isinstance(other, Chain):
            return NotImplemented
        if other.dim != self.dim and not (other.is_zero() or self.is_zero()):
            raise MalformedInputError(
                'cannot add a {}-chain to a {}-chain'.format(other.dim, self.dim))
        dim = self.dim if not self.is_zero() else other.dim
        exact = self.exact and other.exact
        acc = dict(self._coefficients)
        for s, c in other._coefficients.items():
            acc[s] = acc.get(s, 0) + factor * c
        if not exact:
            acc = {s: float(c) for s, c in acc.items()}
        return Chain(dim, acc, exact=exact)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self * -1

    def __mul__(self, scalar):
        if isinstance(scalar, Chain):
            return NotImplemented
        exact = self.exact and isinstance(scalar, Rational)
        if exact:
            scalar = Fraction(scalar)
        return Chain(self.dim, {s: c * scalar for s, c in self._coefficients.items()}
                     if exact else
                     {s: float(c) * float(scalar) for s, c in self._coefficients.items()},
                     exact=exact)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if self.exact and isinstance(scalar, Rational):
            return self * (1 / Fraction(scalar))
        return self * (1.0 / float(scalar))

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.dim == other.dim and self._coefficients == other._coefficients

    def __hash__(self):
        return hash((self.dim, frozenset(self._coefficients.items())))

    def dot(self, other):
        return sum((c * other._coefficients.get(s, 0)
                    for s, c in self._coefficients.items()),
                   Fraction(0) if self.exact and other.exact else 0.0)

    def norm2(self):
        return self.dot(self)

    def boundary(self):
        acc = {}
        for s, c in self._coefficients.items():
            for face, sign in facets(s):
                acc[face] = acc.get(face, 0) + sign * c
        return Chain(self.dim - 1, acc, exact=self.exact)

    def restricted(self, keep):
        return Chain(self.dim, {s: c for s, c in self._coefficients.items() if keep(s)},
                     exact=self.exact)

    def as_float(self):
        return Chain(self.dim, {s: float(c) for s, c in self._coefficients.items()},
                     exact=False)

    def to_vector(self, basis, dtype=object):
        index = {s: i for i, s in enumerate(basis)}
        if dtype is object:
            out = [Fraction(0)] * len(basis)
        else:
            out = np.zeros(len(basis), dtype=dtype)
        for s, c in self._coefficients.items():
            if s not in index:
                raise MembershipError(
                    'simplex {} outside the basis'.format(list(s)))
            out[index[s]] = c if dtype is object else float(c)
        return out

    def __repr__(self):
        terms = ' '.join('{}{}{}'.format('+' if c >= 0 else '', c, list(s)) for s, c in self.items())
        return 'Chain(dim={}, {})'.format(self.dim, terms or '0')


@dataclass(frozen=True)
class BoundaryOperator:
    '''
    Signed incidence matrix between two ordered simplex lists.
    Rows are (d-1)-simplices, columns d-simplices.
    '''
    matrix: sp.csr_matrix
    rows: tuple
    cols: tuple

    @property
    def shape(self):
        return self.matrix.shape

    def dense(self):
        return self.matrix.toarray()

    def to_lists(self):
        return [[int(v) for v in row] for row in self.dense()]

    def restrict(self, keep_row=None, keep_col=None):
        ri = [i for i, s in enumerate(self.rows) if keep_row is None or keep_row(s)]
        ci = [j for j, s in enumerate(self.cols) if keep_col is None or keep_col(s)]
        sub = self.matrix[ri, :][:, ci].tocsr()
        return BoundaryOperator(sub, tuple(self.rows[i] for i in ri),
                                tuple(self.cols[j] for j in ci))


class SimplicialComplex:
    '''
    Downward-closed, weighted simplicial complex.

    Instances are immutable; every modifier returns a new complex. Weights are
    positive fractions and default to 1.
    '''

    def __init__(self, simplices=(), weights=None):
        by_dim = {}
        for s in simplices:
            by_dim.setdefault(len(s) - 1, set()).add(s)
        self._by_dim = {d: tuple(sorted(v)) for d, v in sorted(by_dim.items())}
        self._index = {d: {s: i for i, s in enumerate(v)}
                       for d, v in self._by_dim.items()}
        self._weights = {s: w for s, w in (weights or {}).items() if w != 1}
        self._cofaces = None

    # ---- shape ----
    @property
    def dim(self):
        return max(self._by_dim) if self._by_dim else -1

    def n(self, d):
        return len(self._by_dim.get(d, ()))

    def counts(self):
        return [self.n(d) for d in range(self.dim + 1)]

    def simplices(self, d):
        return self._by_dim.get(d, ())

    def all_simplices(self):
        for d in sorted(self._by_dim):
            yield from self._by_dim[d]

    def vertices(self):
        return [s[0] for s in self.simplices(0)]

    def __len__(self):
        return sum(len(v) for v in self._by_dim.values())

    def __contains__(self, s):
        s = tuple(s)
        return s in self._index.get(len(s) - 1, {})

    def index(self, s):
        try:
            return self._index[len(s) - 1][s]
        except KeyError:
            raise MembershipError(
                'simplex {} not in complex'.format(list(s))) from None

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._by_dim == other._by_dim and self._weights == other._weights

    def __hash__(self):
        return hash(tuple(self.all_simplices()))

    def __repr__(self):
        return 'SimplicialComplex(counts={})'.format(self.counts())

    # ---- weights ----
    def weight(self, s):
        if s not in self:
            raise MembershipError('simplex {} not in complex'.format(list(s)))
        return self._weights.get(s, Fraction(1))

    def weights(self, d):
        return [self._weights.get(s, Fraction(1)) for s in self.simplices(d)]

    def weight_map(self):
        return dict(self._weights)

    def is_weighted(self, d=None):
        if d is None:
            return bool(self._weights)
        return any(len(s) == d + 1 for s in self._weights)

    # ---- incidence ----
    def cofaces(self, s):
        """Immediate cofaces of ``s`` in canonical order."""
        if self._cofaces is None:
            table = {}
            for t in self.all_simplices():
                for face, _ in facets(t):
                    table.setdefault(face, []).append(t)
            self._cofaces = table
        return self._cofaces.get(tuple(s), [])

    def degree(self, s):
        return sum((self.weight(t) for t in self.cofaces(s)), Fraction(0))

    def maximal_simplices(self):
        return [s for s in self.all_simplices() if not self.cofaces(s)]

    def is_pure(self):
        return all(len(s) == self.dim + 1 for s in self.maximal_simplices())

    # ---- derived complexes ----
    def skeleton(self, k):
        kept = [s for s in self.all_simplices() if len(s) <= k + 1]
        return SimplicialComplex(kept, self._weights_on(kept))

    def without(self, removed):
        removed = {tuple(s) for s in removed}
        kept = [s for s in self.all_simplices()
                if not any(set(r) <= set(s) for r in removed)]
        return SimplicialComplex(kept, self._weights_on(kept))

    def with_simplices(self, added, weights=None):
        closed = set(self.all_simplices())
        for s in added:
            closed.update(_faces_of(simplex(s)))
        merged = dict(self._weights)
        merged.update(_parse_weights(weights or {}, closed))
        return SimplicialComplex(closed, merged)

    def relabel(self, mapping, weights=None):
        """Image under an injective vertex map; weights follow their simplices."""
        images = {}
        for s in self.all_simplices():
            image = tuple(sorted(mapping[v] for v in s))
            if len(set(image)) != len(image):
                raise DomainError('vertex map is not injective on {}'.format(list(s)))
            images[s] = image
        moved = {images[s]: w for s, w in self._weights.items()}
        moved.update(weights or {})
        return SimplicialComplex(images.values(), moved)

    def disjoint_union(self, *others):
        parts = [self] + list(others)
        simplices, weights, offset = [], {}, 0
        for part in parts:
            shift = {v: v + offset for v in part.vertices()}
            moved = part.relabel(shift)
            simplices.extend(moved.all_simplices())
            weights.update(moved.weight_map())
            offset += (max(part.vertices()) + 1) if part.vertices() else 0
        return SimplicialComplex(simplices, weights)

    def is_subcomplex_of(self, other):
        return all(s in other for s in self.all_simplices())

    def _weights_on(self, kept):
        kept = set(kept)
        return {s: w for s, w in self._weights.items() if s in kept}


def _faces_of(s):
    for k in range(1, len(s) + 1):
        yield from itertools.combinations(s, k)


def _parse_weights(weights, closed):
    parsed = {}
    for key, value in weights.items():
        s = simplex(key)
        if s not in closed:
            raise MembershipError(
                'weight given for simplex {} outside the complex'.format(list(s)))
        try:
            w = Fraction(value) if not isinstance(value, float) else Fraction(str(value))
        except (TypeError, ValueError, ZeroDivisionError):
            raise MalformedInputError(
                'weight {!r} of {} is not a number'.format(value, list(s))) from None
        if w <= 0:
            raise DomainError('weight of {} must be positive, got {}'.format(list(s), w))
        parsed[s] = w
    return parsed


def build_complex(maximal_simplices, weights=None):
    """Downward closure of ``maximal_simplices`` with optional weights."""
    closed = set()
    for vertices in maximal_simplices:
        s = simplex(vertices)
        if s:
            closed.update(_faces_of(s))
    K = SimplicialComplex(closed, _parse_weights(weights or {}, closed))
    logger.debug('built complex with counts %s', K.counts())
    return K


def boundary_matrix(K, d):
    '''
    Integral boundary matrix of dimension ``d`` in canonical order.

    ``d`` may exceed ``K.dim`` by one, in which case the matrix has no columns.
    '''
    top = max(K.dim, 0) + 1
    if d < 1 or d > top:
        raise DomainError('boundary dimension {} outside [1, {}]'.format(d, top))
    rows, cols = K.simplices(d - 1), K.simplices(d)
    index = K._index.get(d - 1, {})
    data, ri, ci = [], [], []
    for j, s in enumerate(cols):
        for face, sign in facets(s):
            ri.append(index[face])
            ci.append(j)
            data.append(sign)
    matrix = sp.csr_matrix((np.array(data, dtype=np.int64), (ri, ci)),
                           shape=(len(rows), len(cols)), dtype=np.int64)
    return BoundaryOperator(matrix, tuple(rows), tuple(cols))


def coboundary_matrix(K, d):
    """delta_d, the transpose of the boundary matrix of dimension d+1."""
    op = boundary_matrix(K, d + 1)
    return BoundaryOperator(op.matrix.T.tocsr(), op.cols, op.rows)


def apply_boundary(K, f):
    if f.dim < 1:
        raise DomainError('boundary of a {}-chain is not defined here'.format(f.dim))
    for s in f.support():
        if s not in K:
            raise MembershipError('chain is supported on {} outside the complex'.format(list(s)))
    return f.boundary()


def is_cycle(gamma):
    return gamma.dim < 1 or gamma.boundary().is_zero()
