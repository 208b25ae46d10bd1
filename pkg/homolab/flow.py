'''
Effective resistance and capacitance of cycles.

Resistance is the least energy sum f(s)^2 / w(s) of a chain f with boundary
gamma; capacitance is the least energy of a unit potential that vanishes on the
coboundary of a subcomplex. Both are exact rationals by default.
'''
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
import numpy as np
import scipy.linalg as la

from . import linalg, settings
from .complex import Chain, SimplicialComplex, boundary_matrix, facets, is_cycle
from .errors import ContainmentError, DomainError, MembershipError, NumericError
from .spectra import VerificationReport, laplacian, spectrum

logger = logging.getLogger(__name__)

BACKENDS = ('exact', 'float', 'auto')


class _Infinity:
    '''
    The value of a resistance or capacitance that is not attained.
    Compares greater than every number.
    '''
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return 'inf'

    __str__ = __repr__

    def __float__(self):
        return math.inf

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash(math.inf)

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


INFINITY = _Infinity()


def is_finite(value):
    return value is not INFINITY


@dataclass
class FlowResult:
    resistance: object
    flow: Chain = None
    backend: str = 'exact'

    @property
    def finite(self):
        return self.resistance is not INFINITY

    def energy(self, K):
        if self.flow is None:
            return INFINITY
        return sum((c * c / (K.weight(s) if self.flow.exact else float(K.weight(s)))
                    for s, c in self.flow.items()),
                   Fraction(0) if self.flow.exact else 0.0)


@dataclass
class PotentialResult:
    capacitance: object
    potential: Chain = None
    L: SimplicialComplex = None
    K: SimplicialComplex = None

    @property
    def finite(self):
        return self.capacitance is not INFINITY

    def energy(self):
        """Energy of the potential's coboundary in the ambient complex."""
        if self.potential is None:
            return INFINITY
        d = self.potential.dim + 1
        total = Fraction(0)
        for t, w in zip(self.K.simplices(d), self.K.weights(d)):
            value = sum((sign * self.potential[f] for f, sign in facets(t)), Fraction(0))
            total += value * value * w
        return total


def boundary_columns(K, d):
    """Sparse columns ``{row: sign}`` of the boundary of dimension ``d``."""
    index = {s: i for i, s in enumerate(K.simplices(d - 1))}
    return [{index[f]: sign for f, sign in facets(s)} for s in K.simplices(d)]


def _check_cycle(K, gamma):
    if not is_cycle(gamma):
        raise DomainError('gamma is not a cycle: its boundary is {}'.format(gamma.boundary()))
    for s in gamma.support():
        if s not in K:
            raise MembershipError('gamma is supported on {} outside the complex'.format(list(s)))


def effective_resistance(K, gamma, backend='exact'):
    '''
    Minimum-energy unit gamma-flow in ``K``.

    ``backend`` is 'exact' (rational normal equations), 'float' (least
    squares on the weighted boundary) or 'auto', which goes float once the
    number of d-simplices exceeds ``settings.exact_columns``.
    '''
    if backend not in BACKENDS:
        raise DomainError('unknown flow backend {!r}'.format(backend))
    _check_cycle(K, gamma)
    d = gamma.dim + 1
    if backend == 'auto':
        backend = 'exact' if K.n(d) <= settings.exact_columns else 'float'
    exact = backend == 'exact'
    if gamma.is_zero():
        return FlowResult(Fraction(0) if exact else 0.0, Chain.zero(d, exact=exact), backend)
    rows = K.simplices(d - 1)
    if exact:
        b = gamma.to_vector(rows)
        solved = linalg.min_energy_solution(boundary_columns(K, d), len(rows), b, K.weights(d))
        if solved is None:
            return FlowResult(INFINITY, None, backend)
        x, energy = solved
        return FlowResult(energy, Chain.from_vector(d, K.simplices(d), x), backend)
    return _float_resistance(K, gamma, d, rows)


def _float_resistance(K, gamma, d, rows):
    b = gamma.to_vector(rows, dtype=float)
    scale = np.sqrt([float(w) for w in K.weights(d)])
    if K.n(d) == 0:
        return FlowResult(INFINITY, None, 'float')
    A = boundary_matrix(K, d).dense().astype(float) * scale
    try:
        x = la.lstsq(A, b)[0]
    except la.LinAlgError as e:
        raise NumericError('least squares failed on a {}x{} boundary: {}'.format(
            A.shape[0], A.shape[1], e)) from e
    if np.linalg.norm(A @ x - b) > 1e-8 * np.linalg.norm(b):
        return FlowResult(INFINITY, None, 'float')
    flow = Chain.from_vector(d, K.simplices(d), scale * x, exact=False)
    return FlowResult(float(x @ x), flow, 'float')


def is_null_homologous(K, gamma, backend='exact'):
    _check_cycle(K, gamma)
    if gamma.is_zero():
        return True
    d = gamma.dim + 1
    if backend == 'exact':
        rows = boundary_matrix(K, d).to_lists()
        return linalg.solve(rows, gamma.to_vector(K.simplices(d - 1))) is not None
    return effective_resistance(K, gamma, backend).finite


def effective_capacitance(L, K, gamma):
    '''
    Minimum energy of a unit gamma-potential of ``L`` measured in ``K``.

    A unit potential p lives on the (d-1)-simplices of ``L``, has zero
    coboundary in ``L`` and pairs to one with gamma. Writing p = N z for a
    basis N of that kernel, the energy is z^T Q z with Q = N^T d W d^T N and
    the constraint is a^T z = 1 with a = N^T gamma, so the minimum is
    1 / (a^T Q^+ a).
    '''
    if not L.is_subcomplex_of(K):
        raise ContainmentError('L is not a subcomplex of K')
    _check_cycle(L, gamma)
    if not is_null_homologous(K, gamma):
        raise DomainError('capacitance needs gamma null-homologous in the ambient complex')
    d = gamma.dim + 1
    basis = L.simplices(d - 1)
    index = {s: i for i, s in enumerate(basis)}
    cobound = [[Fraction(0)] * len(basis) for _ in L.simplices(d)]
    for row, t in zip(cobound, L.simplices(d)):
        for f, sign in facets(t):
            row[index[f]] = Fraction(sign)
    kernel = linalg.nullspace(cobound, len(basis))
    g = gamma.to_vector(basis)
    a = [sum((x * y for x, y in zip(v, g)), Fraction(0)) for v in kernel]
    if not any(a):
        return PotentialResult(INFINITY, None, L, K)

    outside = [(t, w) for t, w in zip(K.simplices(d), K.weights(d)) if t not in L]
    images = [[sum((sign * v[index[f]] for f, sign in facets(t) if f in index), Fraction(0))
               for t, _ in outside] for v in kernel]
    weights = [w for _, w in outside]
    Q = [[sum((w * x * y for w, x, y in zip(weights, vj, vl)), Fraction(0))
          for vl in images] for vj in images]
    z = linalg.solve(Q, a)
    if z is None:
        raise NumericError('potential system is inconsistent')
    s = sum((x * y for x, y in zip(a, z)), Fraction(0))
    if s <= 0:
        raise NumericError('potential system has non-positive value {}'.format(s))
    p = [sum((zj * v[i] for zj, v in zip(z, kernel)), Fraction(0)) / s
         for i in range(len(basis))]
    return PotentialResult(1 / s, Chain.from_vector(d - 1, basis, p), L, K)


def is_stationary(K, result):
    '''
    True when the flow is orthogonal, in the weighted inner product, to every
    d-cycle of ``K``; that is, no boundary-preserving change lowers its energy.
    '''
    if not result.finite or result.flow.is_zero():
        return True
    flow = result.flow
    d = flow.dim
    cycles = linalg.nullspace(boundary_matrix(K, d).to_lists(), K.n(d))
    values = [flow[s] / K.weight(s) for s in K.simplices(d)]
    for z in cycles:
        pairing = sum((x * y for x, y in zip(values, z)), Fraction(0) if flow.exact else 0.0)
        if abs(pairing) > (0 if flow.exact else 1e-9):
            return False
    return True


@dataclass
class GapTransfer:
    lambda_min: float
    cycle: Chain
    resistance: float

    @property
    def product(self):
        return self.lambda_min * self.resistance


def spectral_gap_transfer(K, d):
    '''
    Smallest nonzero eigenvalue of the weighted up Laplacian on (d-1)-chains,
    its unit eigenvector as a cycle, and that cycle's resistance; the two
    are reciprocal.
    '''
    M = laplacian(K, d - 1, 'weighted-up')
    report = spectrum(M, vectors=True)
    if report.gap is None:
        raise DomainError('the up Laplacian in dimension {} has no nonzero eigenvalue'.format(d - 1))
    i = int(np.flatnonzero(report.eigenvalues > report.threshold)[0])
    gamma = Chain.from_vector(d - 1, M.basis, report.eigenvectors[:, i], exact=False)
    result = effective_resistance(K, gamma, backend='float')
    logger.debug('gap %.6g with resistance %s', report.gap, result.resistance)
    return GapTransfer(report.gap, gamma, result.resistance)


@dataclass
class CapacitanceBound:
    capacitance: object
    lambda_min: float
    n0: int

    @property
    def spectral_value(self):
        return self.n0 / self.lambda_min


def capacitance_bound(L, sigma):
    '''
    Capacitance of the boundary of ``sigma`` in L plus sigma, next to
    n_0 / lambda_min of the combinatorial Laplacian of that complex.
    '''
    K = L.with_simplices([sigma])
    gamma = Chain.of(sigma).boundary()
    C = effective_capacitance(L, K, gamma)
    gap = spectrum(laplacian(K, len(sigma) - 2, 'combinatorial')).gap
    if gap is None:
        raise DomainError('Laplacian of L plus {} has no nonzero eigenvalue'.format(list(sigma)))
    return CapacitanceBound(C.capacitance, gap, K.n(0))


def graph_resistance(K, s, t):
    '''
    Resistance between vertices ``s`` and ``t`` of the 1-skeleton from
    networkx, edge weights read as conductances. Returns INFINITY when the
    two are disconnected.
    '''
    graph = nx.Graph()
    graph.add_nodes_from(K.vertices())
    for e, w in zip(K.simplices(1), K.weights(1)):
        graph.add_edge(*e, resistance=1 / float(w))
    if s == t:
        return 0.0
    if not nx.has_path(graph, s, t):
        return INFINITY
    part = graph.subgraph(nx.node_connected_component(graph, s))
    return float(nx.resistance_distance(part, s, t, weight='resistance', invert_weight=True))


# ---- resistance formulas ----

@dataclass
class SeriesInstance:
    '''Two complexes with disjoint d-simplices and gamma = gamma1 + gamma2.'''
    K1: SimplicialComplex
    K2: SimplicialComplex
    gamma: Chain
    gamma1: Chain
    gamma2: Chain
    name: str = 'series'


@dataclass
class ParallelInstance:
    K1: SimplicialComplex
    K2: SimplicialComplex
    gamma: Chain
    name: str = 'parallel'


@dataclass
class MonotoneInstance:
    L: SimplicialComplex
    K: SimplicialComplex
    gamma: Chain
    name: str = 'monotonicity'


def union(K1, K2):
    weights = dict(K1.weight_map())
    weights.update(K2.weight_map())
    return SimplicialComplex(set(K1.all_simplices()) | set(K2.all_simplices()), weights)


def _image_rank(K, d, parts):
    basis = K.simplices(d - 1)
    index = {s: i for i, s in enumerate(basis)}
    rows = []
    for part in parts:
        for t in part.simplices(d):
            row = [0] * len(basis)
            for f, sign in facets(t):
                row[index[f]] = sign
            rows.append(row)
    return linalg.rank(rows)


def _supported(K, chain):
    return all(s in K for s in chain.support())


def _shared_top(K1, K2, d):
    return set(K1.simplices(d)) & set(K2.simplices(d))


def _series(report, inst):
    d = inst.gamma.dim + 1
    if _shared_top(inst.K1, inst.K2, d):
        return report.add(inst.name, True, 'd-simplices overlap', skipped=True)
    if inst.gamma1 + inst.gamma2 != inst.gamma:
        return report.add(inst.name, True, 'gamma1 + gamma2 differs from gamma', skipped=True)
    if not (_supported(inst.K1, inst.gamma1) and _supported(inst.K2, inst.gamma2)
            and is_null_homologous(inst.K1, inst.gamma1)
            and is_null_homologous(inst.K2, inst.gamma2)):
        return report.add(inst.name, True, 'parts are not null-homologous', skipped=True)
    K = union(inst.K1, inst.K2)
    R = effective_resistance(K, inst.gamma).resistance
    bound = (effective_resistance(inst.K1, inst.gamma1).resistance
             + effective_resistance(inst.K2, inst.gamma2).resistance)
    r1, r2 = _image_rank(K, d, [inst.K1]), _image_rank(K, d, [inst.K2])
    unique = r1 + r2 == _image_rank(K, d, [inst.K1, inst.K2])
    passed = R == bound if unique else R <= bound
    report.add(inst.name, passed, 'R={} bound={} unique={}'.format(R, bound, unique))


def _parallel(report, inst):
    d = inst.gamma.dim + 1
    if _shared_top(inst.K1, inst.K2, d):
        return report.add(inst.name, True, 'd-simplices overlap', skipped=True)
    if not (_supported(inst.K1, inst.gamma) and _supported(inst.K2, inst.gamma)
            and is_null_homologous(inst.K1, inst.gamma)
            and is_null_homologous(inst.K2, inst.gamma)) or inst.gamma.is_zero():
        return report.add(inst.name, True, 'gamma is not a boundary in both parts', skipped=True)
    K = union(inst.K1, inst.K2)
    R = effective_resistance(K, inst.gamma).resistance
    R1 = effective_resistance(inst.K1, inst.gamma).resistance
    R2 = effective_resistance(inst.K2, inst.gamma).resistance
    bound = 1 / (1 / R1 + 1 / R2)
    r1, r2 = _image_rank(K, d, [inst.K1]), _image_rank(K, d, [inst.K2])
    tight = r1 + r2 - _image_rank(K, d, [inst.K1, inst.K2]) == 1
    passed = R == bound if tight else R <= bound
    report.add(inst.name, passed, 'R={} bound={} tight={}'.format(R, bound, tight))


def _monotone(report, inst):
    if not inst.L.is_subcomplex_of(inst.K):
        return report.add(inst.name, True, 'L is not a subcomplex of K', skipped=True)
    if not (_supported(inst.L, inst.gamma) and is_null_homologous(inst.L, inst.gamma)):
        return report.add(inst.name, True, 'gamma is not a boundary in L', skipped=True)
    R_K = effective_resistance(inst.K, inst.gamma).resistance
    R_L = effective_resistance(inst.L, inst.gamma).resistance
    report.add(inst.name, R_K <= R_L, 'R(K)={} R(L)={}'.format(R_K, R_L))


def verify_flow_formulas(instances):
    '''
    Check series, parallel and monotonicity instances exactly. Instances
    whose hypotheses fail are recorded as skipped with the reason.
    '''
    report = VerificationReport('flow formulas')
    handlers = {SeriesInstance: _series, ParallelInstance: _parallel,
                MonotoneInstance: _monotone}
    for inst in instances:
        handler = handlers.get(type(inst))
        if handler is None:
            raise DomainError('unknown formula instance {!r}'.format(type(inst).__name__))
        handler(report, inst)
    return report
