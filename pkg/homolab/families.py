'''
Complex families with extreme resistance, capacitance and spectral gap.

All of them are glued from one building block: the stellar prism over the
boundary of a d-simplex with each cone point identified with a top-level
vertex. Vertex (i, level j) is numbered j * (d + 1) + i.
'''
import itertools
import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from . import settings
from .betti import reduced_rank
from .complex import Chain, SimplicialComplex, build_complex
from .constructions import pushforward, stellar_prism
from .errors import ConstructionError, DomainError, ResourceError
from .flow import is_null_homologous

logger = logging.getLogger(__name__)


@dataclass
class GeneratedFamily:
    '''
    A generated complex (or pair L in K) with its designated cycle.

    ``gamma`` is stored unnormalised with squared norm ``norm2``; the unit
    cycle is gamma / sqrt(norm2). Resistance scales as 1/c^2 and capacitance
    as c^2 under gamma -> gamma / c.
    '''
    name: str
    d: int
    n: int
    K: SimplicialComplex
    gamma: Chain
    norm2: Fraction
    L: SimplicialComplex = None
    certificates: dict = field(default_factory=dict)
    log: list = field(default_factory=list)

    def unit_resistance(self, resistance):
        return resistance / self.norm2

    def unit_capacitance(self, capacitance):
        return capacitance * self.norm2

    @property
    def provenance(self):
        return {'family': self.name, 'd': self.d, 'n': self.n}


def level_simplex(d, level):
    """sigma x {level}: the d-simplex on level ``level``."""
    return tuple(level * (d + 1) + i for i in range(d + 1))


def _check_parameters(d, n=1):
    if d < 1 or n < 1:
        raise DomainError('family parameters need d >= 1 and n >= 1, got d={} n={}'.format(d, n))


def building_block(d):
    '''
    The block B_d and a chain f on it with
    boundary(f) = boundary(sigma x 0) + d * boundary(sigma x 1).

    B_d is the stellar prism over the boundary of the d-simplex sigma on
    vertices 0..d, with the cone point of the facet missing vertex i
    identified with (i, 1).
    '''
    _check_parameters(d)
    N = d + 1
    sigma = tuple(range(N))
    K = build_complex([s for s, _ in Chain.of(sigma).boundary().items()])
    construction = stellar_prism(K)
    if construction.offset != N:
        raise ConstructionError('unexpected vertex offset {}'.format(construction.offset))
    identify = {}
    for facet, apex in construction.apexes.items():
        (missing,) = set(sigma) - set(facet)
        identify[apex] = N + missing
    mapping = {v: identify.get(v, v) for v in construction.complex.vertices()}
    B = construction.complex.relabel(mapping)

    image = pushforward(construction.maps['SP'](Chain.of(sigma).boundary()), mapping)
    target = Chain.of(level_simplex(d, 0)).boundary() + d * Chain.of(level_simplex(d, 1)).boundary()
    for f in (-image, image):
        if f.boundary() == target:
            break
    else:
        raise ConstructionError('building block chain for d={} misses its boundary'.format(d))
    logger.debug('building block d=%d: %d top cells, |f|^2=%s', d, B.n(d), f.norm2())
    return B, f


def _block_map(N, level0, level1):
    """Send local level 0 to ``level0`` and local level 1 to ``level1``."""
    def target(v):
        i, j = v % N, v // N
        return (level0 if j == 0 else level1) * N + i
    return target


def _glue(B, f, N, levels):
    blocks, chains = [], []
    for level0, level1 in levels:
        target = _block_map(N, level0, level1)
        mapping = {v: target(v) for v in B.vertices()}
        blocks.append(B.relabel(mapping))
        chains.append(pushforward(f, mapping))
    return blocks, chains


def _cap(d, n, block):
    estimate = n * len(block)
    if estimate > settings.max_simplices:
        raise ResourceError('family d={} n={} needs about {} simplices, cap is {}'.format(
            d, n, estimate, settings.max_simplices))


def _union(blocks, extra=()):
    simplices = set(extra)
    for block in blocks:
        simplices.update(block.all_simplices())
    return build_complex(simplices)


def resistance_family(d, n):
    '''
    B_d^n: n blocks stacked downwards from level n to level 0 plus sigma x 0.
    The chain y_n with y_0 = sigma x 0 and y_k = f_k - d y_{k-1} is the only
    flow for boundary(sigma x n), and its energy grows like d^(2n).
    '''
    _check_parameters(d, n)
    B, f = building_block(d)
    _cap(d, n, B)
    N = d + 1
    blocks, chains = _glue(B, f, N, [(k, k - 1) for k in range(1, n + 1)])
    base = level_simplex(d, 0)
    K = _union(blocks, [base])

    log = []
    y = Chain.of(base)
    for k, fk in enumerate(chains, start=1):
        expected = fk.norm2() + d * d * y.norm2()
        y = fk - d * y
        if y.norm2() != expected:
            raise ConstructionError('f_{} is not orthogonal to y_{}'.format(k, k - 1))
        log.append('y_{}: |y|^2 = {}'.format(k, y.norm2()))
    top = Chain.of(level_simplex(d, n))
    gamma = top.boundary()
    if y.boundary() != gamma:
        raise ConstructionError('boundary of y_{} is not boundary(sigma x {})'.format(n, n))
    if reduced_rank(K, d) != K.n(d):
        raise ConstructionError('B_{}^{} has d-cycles'.format(d, n))
    logger.info('resistance family d=%d n=%d: counts %s', d, n, K.counts())
    return GeneratedFamily('B', d, n, K, gamma, Fraction(d + 1),
                           certificates={'y': y, 'f': chains}, log=log)


def capacitance_family(d, n):
    '''
    P_d^n inside Q_d^n: n blocks stacked upwards from level 0 to level n; Q
    also holds sigma x 0 and P does not. boundary(sigma x n) bounds in Q only
    through a chain whose weight on sigma x 0 is d^-n.
    '''
    _check_parameters(d, n)
    B, f = building_block(d)
    _cap(d, n, B)
    N = d + 1
    blocks, chains = _glue(B, f, N, [(i - 1, i) for i in range(1, n + 1)])
    base = level_simplex(d, 0)
    Q = _union(blocks, [base])
    P = Q.without([base])

    step = Fraction(1, d)
    y = chains[0] * step
    for fi in chains[1:]:
        y = fi * step - y * step
    gamma = Chain.of(level_simplex(d, n)).boundary()
    shrink = Fraction((-1) ** (n - 1), d ** n)
    if y.boundary() != gamma + shrink * Chain.of(base).boundary():
        raise ConstructionError('part-one chain has the wrong boundary')
    if any(s not in P for s in y.support()):
        raise ConstructionError('part-one chain leaves P')
    z = y - shrink * Chain.of(base)
    if z.boundary() != gamma:
        raise ConstructionError('part-two chain has the wrong boundary')
    if is_null_homologous(P, gamma):
        raise ConstructionError('boundary(sigma x {}) bounds in P'.format(n))
    logger.info('capacitance family d=%d n=%d: counts %s', d, n, Q.counts())
    return GeneratedFamily('PQ', d, n, Q, gamma, Fraction(d + 1), L=P,
                           certificates={'y': y, 'z': z, 'f': chains},
                           log=['coefficient on sigma x 0: {}'.format(-shrink)])


def many_small(d, n, copies=None):
    '''
    Disjoint copies of B_d^n, by default one per d-simplex of B_d^n, so that
    the small eigenvalue repeats.
    '''
    family = resistance_family(d, n)
    copies = family.K.n(d) if copies is None else copies
    if copies < 1:
        raise DomainError('need at least one copy')
    if copies * len(family.K) > settings.max_simplices:
        raise ResourceError('{} copies of {} simplices exceed the cap {}'.format(
            copies, len(family.K), settings.max_simplices))
    K = family.K.disjoint_union(*[family.K] * (copies - 1))
    logger.info('many small d=%d n=%d: %d copies, counts %s', d, n, copies, K.counts())
    return GeneratedFamily('M', d, n, K, family.gamma, family.norm2,
                           certificates={'y': family.certificates['y']},
                           log=['{} copies'.format(copies)])


# ---- colourings ----

def generalized_degree(K):
    '''
    Delta(K): over 1 <= i < j <= dim K, the most j-simplices containing a
    single i-simplex.
    '''
    best = 0
    for j in range(2, K.dim + 1):
        for i in range(1, j):
            counts = Counter()
            for t in K.simplices(j):
                counts.update(itertools.combinations(t, i + 1))
            if counts:
                best = max(best, max(counts.values()))
    return best


def newman_bound(K):
    """Colour count 18 (Delta + 1)^6 d^6 n_0^(1/d) under which a proper colouring exists."""
    d = K.dim
    if d < 1:
        return None
    return 18 * (generalized_degree(K) + 1) ** 6 * d ** 6 * K.n(0) ** (1 / d)


@dataclass
class ColoringData:
    coloring: dict
    edges_ok: bool
    facets_ok: bool
    degree: int
    complex: SimplicialComplex = None
    violation: str = ''

    @property
    def proper(self):
        return self.edges_ok and self.facets_ok

    @property
    def colors(self):
        return len(set(self.coloring.values()))


def check_coloring(K, coloring):
    '''
    Properness: (1) the ends of every edge differ in colour and (2) distinct
    (d-1)-simplices have distinct colour sets.
    '''
    missing = [v for v in K.vertices() if v not in coloring]
    if missing:
        raise DomainError('coloring misses vertices {}'.format(missing[:5]))
    violation = ''
    bad_edge = next((e for e in K.simplices(1) if coloring[e[0]] == coloring[e[1]]), None)
    if bad_edge is not None:
        violation = 'condition (1): edge {} is monochromatic'.format(list(bad_edge))
    seen, clash = {}, None
    for s in (K.simplices(K.dim - 1) if K.dim >= 1 else ()):
        key = frozenset(coloring[v] for v in s)
        if key in seen:
            clash = (seen[key], s)
            break
        seen[key] = s
    if clash is not None and not violation:
        violation = 'condition (2): {} and {} share colours'.format(list(clash[0]), list(clash[1]))
    return ColoringData(dict(coloring), bad_edge is None, clash is None,
                        generalized_degree(K), violation=violation)


def pattern_complex(K, coloring):
    '''
    K_c = {c(sigma)}: vertices of one colour identified. Needs a proper
    colouring, under which the (d-1)- and d-simplices of K and K_c correspond.
    '''
    data = check_coloring(K, coloring)
    if not data.proper:
        raise DomainError('coloring is not proper, {}'.format(data.violation))
    images = {s: tuple(sorted(coloring[v] for v in s)) for s in K.all_simplices()}
    weights = {images[s]: w for s, w in K.weight_map().items()}
    data.complex = SimplicialComplex(set(images.values()), weights)
    return data


def random_proper_coloring(K, color_budget, attempts=100, seed=None):
    '''
    Randomised greedy search: vertices in random order take a random colour
    that keeps both properness conditions on everything coloured so far.
    Returns the first proper ColoringData found, or None after ``attempts``.
    '''
    if color_budget < 1 or attempts < 1:
        raise DomainError('color budget and attempts must be positive')
    rng = random.Random(seed)
    d = K.dim
    neighbours = {v: set() for v in K.vertices()}
    for a, b in K.simplices(1):
        neighbours[a].add(b)
        neighbours[b].add(a)
    ridges = {v: [] for v in K.vertices()}
    for s in (K.simplices(d - 1) if d >= 1 else ()):
        for v in s:
            ridges[v].append(s)
    for attempt in range(attempts):
        order = list(K.vertices())
        rng.shuffle(order)
        coloring, used = {}, {}
        for v in order:
            palette = list(range(color_budget))
            rng.shuffle(palette)
            for c in palette:
                if any(coloring.get(u) == c for u in neighbours[v]):
                    continue
                coloring[v] = c
                keys = [frozenset(coloring[u] for u in s) for s in ridges[v]
                        if all(u in coloring for u in s)]
                if len(set(keys)) == len(keys) and not any(k in used for k in keys):
                    used.update((k, v) for k in keys)
                    break
                del coloring[v]
            else:
                break
        if len(coloring) == len(order):
            logger.info('proper coloring with %d colours after %d attempts',
                        len(set(coloring.values())), attempt + 1)
            return pattern_complex(K, coloring)
    logger.info('no proper coloring with %d colours in %d attempts', color_budget, attempts)
    return None
