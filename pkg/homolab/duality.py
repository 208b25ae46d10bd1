'''
Duality for complexes embedded in R^(d+1): the graph dual to the d-simplices,
whose vertices are the voids of the embedding, and the identity between the
capacitance of gamma in (L, K) and an s-t resistance of that graph.

Embeddings are not computed. The bounded voids come in as signed d-chains,
their boundaries; the unbounded void is added explicitly.
'''
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from . import linalg
from .betti import matrix_reduction_betti
from .complex import Chain, SimplicialComplex, boundary_matrix, facets
from .errors import DomainError, MembershipError
from .flow import INFINITY, effective_capacitance, is_null_homologous
from .spectra import VerificationReport

logger = logging.getLogger(__name__)

SIGMA = 'sigma'
INFINITE = 'inf'


@dataclass
class EmbeddedDualData:
    '''
    Dual graph of an embedded complex with the void at ``split`` cut in two
    along an extra cell Sigma with boundary -gamma: V_s bounded by
    Gamma_1 - Sigma and V_t by Gamma_2 + Sigma.

    ``incidence`` maps each d-simplex, and SIGMA, to its signed dual edge
    ``{dual vertex: coefficient}``; a simplex touching only the unbounded
    void on both sides is a loop there and has an empty column.
    '''
    K: SimplicialComplex
    voids: list
    split: int
    gamma1: Chain
    gamma2: Chain
    gamma: Chain
    vertices: list
    incidence: dict = field(repr=False)

    @property
    def d(self):
        return self.gamma1.dim

    def dual_edges(self, L):
        """d-simplices of K that are not in L: the edges of L*."""
        return [sigma for sigma in self.K.simplices(self.d) if sigma not in L]

    def graph(self, L=None):
        '''
        networkx view of the dual graph, parallel edges merged. A dual edge has
        weight 1 / w(sigma), so its conductance is 1 / w(sigma). Loops are dropped.
        '''
        G = nx.Graph()
        G.add_nodes_from(self.vertices)
        edges = self.K.simplices(self.d) if L is None else self.dual_edges(L)
        for sigma in edges:
            ends = list(self.incidence[sigma])
            if len(ends) != 2:
                continue
            w = 1 / float(self.K.weight(sigma))
            if G.has_edge(*ends):
                G[ends[0]][ends[1]]['conductance'] += w
            else:
                G.add_edge(*ends, conductance=w)
        return G


def fundamental_cycle(K):
    '''
    The generator of the top homology of a complex with top Betti number 1,
    scaled to coprime integers with a positive first entry.
    '''
    d = K.dim
    if d < 1:
        raise DomainError('fundamental cycle needs dimension at least 1')
    kernel = linalg.nullspace(boundary_matrix(K, d).to_lists(), K.n(d))
    if len(kernel) != 1:
        raise DomainError('top Betti number is {}, not 1'.format(len(kernel)))
    v = kernel[0]
    lcm = math.lcm(*(c.denominator for c in v))
    ints = [int(c * lcm) for c in v]
    g = math.gcd(*ints)
    first = next(c for c in ints if c)
    scale = g if first > 0 else -g
    return Chain(d, {s: Fraction(c, scale) for s, c in zip(K.simplices(d), ints) if c})


def partition_void(void, selector):
    '''
    Split a void boundary into Gamma_1, the part on simplices where
    ``selector`` holds, and Gamma_2, the rest. gamma is the boundary of
    Gamma_1.
    '''
    gamma1 = void.restricted(selector)
    gamma2 = void - gamma1
    return gamma1, gamma2, gamma1.boundary()


def build_dual(K, voids, gamma1, gamma2, gamma, split=0):
    '''
    Dual graph of K from the boundaries of its bounded voids, with void
    ``split`` divided by gamma.

    Raises DomainError when a void boundary is not a cycle, when the voids
    do not match the top Betti number of K, when a d-simplex lies on more
    than two voids or twice with the same sign, or when Gamma_1 and Gamma_2
    do not partition the split void with boundaries gamma and -gamma.
    '''
    d = gamma1.dim
    if d < 1:
        raise DomainError('duality needs d >= 1')
    voids = [Chain(v.dim, dict(v.items())) for v in voids]
    for i, v in enumerate(voids):
        if v.dim != d:
            raise DomainError('void {} has dimension {}, not {}'.format(i, v.dim, d))
        for s in v.support():
            if s not in K:
                raise MembershipError('void {} is supported on {} outside the complex'.format(
                    i, list(s)))
        if not v.boundary().is_zero():
            raise DomainError('void {} boundary is not a cycle'.format(i))
    if not 0 <= split < len(voids):
        raise DomainError('split index {} outside the {} voids'.format(split, len(voids)))
    betti = matrix_reduction_betti(K, d)
    if len(voids) != betti:
        raise DomainError('{} bounded voids but the top Betti number is {}'.format(len(voids), betti))

    if set(gamma1.support()) & set(gamma2.support()):
        raise DomainError('partition: Gamma_1 and Gamma_2 share simplices')
    if gamma1 + gamma2 != voids[split]:
        raise DomainError('partition: Gamma_1 + Gamma_2 is not the split void boundary')
    if gamma1.boundary() != gamma:
        raise DomainError('partition: the boundary of Gamma_1 is not gamma')
    if gamma2.boundary() != -gamma:
        raise DomainError('partition: the boundary of Gamma_2 is not -gamma')

    names = ['V{}'.format(i) for i in range(len(voids))]
    names[split] = None
    incidence = {}
    for sigma in K.simplices(d):
        column = {}
        for name, v in zip(names, voids):
            if name is not None and v[sigma]:
                column[name] = v[sigma]
        if gamma1[sigma]:
            column['s'] = gamma1[sigma]
        if gamma2[sigma]:
            column['t'] = gamma2[sigma]
        total = sum(column.values(), Fraction(0))
        if len(column) > 2 or (len(column) == 2 and total != 0):
            raise DomainError('{} is not on two voids with opposite signs'.format(list(sigma)))
        if len(column) == 1:
            column[INFINITE] = -total
        incidence[sigma] = column
    incidence[SIGMA] = {'s': Fraction(-1), 't': Fraction(1)}
    vertices = [n for n in names if n is not None] + ['s', 't', INFINITE]
    logger.debug('dual graph with %d vertices and %d edges', len(vertices), len(incidence))
    return EmbeddedDualData(K, voids, split, gamma1, gamma2, gamma, vertices, incidence)


def dual_resistance(data, L):
    '''
    Exact resistance between s and t in L*, the dual edges of the d-simplices
    missing from L, with dual weights 1 / w. INFINITY if s and t are not
    connected there.
    '''
    index = {v: i for i, v in enumerate(data.vertices)}
    edges = data.dual_edges(L)
    columns = [{index[v]: c for v, c in data.incidence[sigma].items()} for sigma in edges]
    # energy sum f^2 / w* with w* = 1/w
    weights = [data.K.weight(sigma) for sigma in edges]
    b = [Fraction(0)] * len(index)
    b[index['s']], b[index['t']] = Fraction(1), Fraction(-1)
    solution = linalg.min_energy_solution(columns, len(index), b, [1 / w for w in weights])
    if solution is None:
        return INFINITY, None
    x, energy = solution
    return energy, dict(zip(edges, x))


def _dual_boundary_rank(data):
    rows = boundary_matrix(data.K, data.d).to_lists()
    columns = linalg.transpose(rows, data.K.n(data.d))
    basis = data.K.simplices(data.d - 1)
    columns.append([-c for c in data.gamma.to_vector(basis)])
    return linalg.rank(columns)


def dual_homology_check(data):
    '''
    True when the augmented dual complex has no first homology: every cycle
    of the dual graph bounds a dual face, one for each (d-1)-simplex, with
    Sigma on the faces of the simplices in gamma.
    '''
    G = nx.MultiGraph()
    G.add_nodes_from(data.vertices)
    for sigma, column in data.incidence.items():
        ends = list(column)
        if len(ends) == 2:
            G.add_edge(*ends)
        else:
            G.add_edge(INFINITE, INFINITE)
    cycles = G.number_of_edges() - G.number_of_nodes() + nx.number_connected_components(G)
    return _dual_boundary_rank(data) == cycles


@dataclass
class DualityCheck:
    capacitance: object
    resistance: object
    report: VerificationReport

    @property
    def difference(self):
        if self.capacitance is INFINITY or self.resistance is INFINITY:
            return 0 if self.capacitance is self.resistance else INFINITY
        return abs(self.capacitance - self.resistance)

    @property
    def passed(self):
        return self.report.passed

    def to_dict(self):
        return {'capacitance': str(self.capacitance), 'resistance': str(self.resistance),
                'difference': str(self.difference), 'passed': self.passed,
                'report': self.report.to_dict()}


def check_duality(data, L):
    '''
    Capacitance of gamma in (L, K) against the s-t resistance of L*, with
    the dual circulation built from the optimal potential: delta p on the
    dual edges and 1 on Sigma, of the same energy. Raises DomainError when
    gamma already bounds in L.
    '''
    if not L.is_subcomplex_of(data.K):
        raise DomainError('L is not a subcomplex of the embedded complex')
    if not is_null_homologous(data.K, data.gamma):
        raise DomainError('gamma does not bound in K')
    if is_null_homologous(L, data.gamma):
        raise DomainError('gamma already bounds in L')
    potential = effective_capacitance(L, data.K, data.gamma)
    resistance, _ = dual_resistance(data, L)
    C = potential.capacitance
    report = VerificationReport('duality')
    report.add('capacitance = dual resistance', C == resistance, '{} vs {}'.format(C, resistance))

    p = potential.potential
    circulation = {sigma: sum((sign * p[f] for f, sign in facets(sigma)), Fraction(0))
                   for sigma in data.dual_edges(L)}
    circulation[SIGMA] = Fraction(1)
    net = {}
    for edge, value in circulation.items():
        for v, c in data.incidence[edge].items():
            net[v] = net.get(v, Fraction(0)) + c * value
    report.add('dual circulation', not any(net.values()))
    energy = sum((value * value * data.K.weight(sigma)
                  for sigma, value in circulation.items() if sigma != SIGMA), Fraction(0))
    report.add('circulation energy', energy == C, '{} vs {}'.format(energy, C))
    report.add('dual H_1 = 0', dual_homology_check(data))

    G = data.graph(L)
    if nx.has_path(G, 's', 't') and resistance is not INFINITY:
        part = G.subgraph(nx.node_connected_component(G, 's'))
        value = nx.resistance_distance(part, 's', 't', weight='conductance', invert_weight=False)
        report.add('float cross-check', abs(float(value) - float(resistance)) <= 1e-9 * max(1.0, float(resistance)),
                   '{:.12g}'.format(value))
    if not report.passed:
        logger.warning('duality failed on L with counts %s', L.counts())
    return DualityCheck(C, resistance, report)
