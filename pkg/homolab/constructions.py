'''
Prism, stellar subdivision and stellar prism of a complex, with the chain
maps between the source and the derived complex.

Vertex ids of a derived complex: a source vertex v keeps id v on the bottom
level and gets v + N on the top level, N being one more than the largest
source id. New cone points follow after that.
'''
import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .complex import Chain, SimplicialComplex, build_complex, orient
from .errors import ConstructionError, DomainError
from .spectra import VerificationReport

logger = logging.getLogger(__name__)


class ChainMap:
    '''
    Linear map on chains given by its value on each oriented simplex.
    ``degree`` is the shift in dimension (1 for prism operators).
    '''

    def __init__(self, name, image, degree=0):
        self.name = name
        self._image = image
        self.degree = degree

    def image(self, s):
        return self._image(tuple(s))

    def apply(self, chain):
        acc = {}
        for s, c in chain.items():
            for t, v in self.image(s).items():
                acc[t] = acc.get(t, 0) + c * v
        return Chain(chain.dim + self.degree, acc)

    __call__ = apply

    def matrix(self, source, target, k):
        '''Integer matrix from k-chains of ``source`` to chains of ``target``.'''
        rows = {s: i for i, s in enumerate(target.simplices(k + self.degree))}
        data, ri, ci = [], [], []
        for j, s in enumerate(source.simplices(k)):
            for t, v in self.image(s).items():
                if v.denominator != 1:
                    raise ConstructionError('{} has a non-integral image'.format(self.name))
                ri.append(rows[t])
                ci.append(j)
                data.append(int(v))
        return sp.csr_matrix((np.array(data, dtype=np.int64), (ri, ci)),
                             shape=(len(rows), source.n(k)), dtype=np.int64)

    def __repr__(self):
        return 'ChainMap({!r}, degree={})'.format(self.name, self.degree)


@dataclass
class Construction:
    '''A derived complex with its chain maps, keyed by name.'''
    source: SimplicialComplex
    complex: SimplicialComplex
    maps: dict
    offset: int
    apexes: dict = field(default_factory=dict)


def _offset(K):
    vertices = K.vertices()
    return (max(vertices) + 1) if vertices else 0


def pushforward(chain, mapping):
    '''
    Image of a chain under a vertex map. Simplices whose image repeats a
    vertex vanish; the rest pick up the sign of the sorting permutation.
    '''
    acc = {}
    for s, c in chain.items():
        image, sign = orient(mapping.get(v, v) for v in s)
        if image is None:
            continue
        acc[image] = acc.get(image, 0) + sign * c
    return Chain(chain.dim, acc, exact=chain.exact)


def cone(chain, apex):
    '''
    Join each simplex with ``apex`` placed first. The cone of a vertex u is
    the edge [apex, u]; the cone of the empty chain of dimension -1 is zero.
    '''
    acc = {}
    for s, c in chain.items():
        image, sign = orient((apex,) + s)
        if image is None:
            raise DomainError('apex {} lies in {}'.format(apex, list(s)))
        acc[image] = acc.get(image, 0) + sign * c
    return Chain(chain.dim + 1, acc, exact=chain.exact)


def _level(s, shift):
    return tuple(v + shift for v in s)


def _prism_pieces(s, N):
    """sigma^i = (v_0..v_i on the bottom, v_i..v_k on the top) for each i."""
    return [s[:i + 1] + _level(s[i:], N) for i in range(len(s))]


def _prism_map(N):
    def image(s):
        return Chain(len(s), {piece: (-1) ** i for i, piece in enumerate(_prism_pieces(s, N))})
    return ChainMap('P', image, degree=1)


def _inclusions(N):
    return (ChainMap('I0', lambda s: Chain.of(s)),
            ChainMap('I1', lambda s: Chain.of(_level(s, N))))


def _require_pure(K):
    if K.dim < 0 or not K.is_pure():
        raise DomainError('construction needs a non-empty pure complex')


def prism(K):
    '''
    Triangulation of K x [0, 1] with the inclusions I0, I1 of the two ends
    and the prism operator P, which satisfies dP + Pd = I1 - I0.
    '''
    N = _offset(K)
    pieces = [piece for s in K.all_simplices() for piece in _prism_pieces(s, N)]
    PK = build_complex(pieces)
    I0, I1 = _inclusions(N)
    logger.debug('prism with counts %s', PK.counts())
    return Construction(K, PK, {'I0': I0, 'I1': I1, 'P': _prism_map(N)}, N)


def _stellar(K, shift, base):
    '''
    Subdivide every top simplex of K, shifted by ``shift``, around a new
    vertex numbered ``base`` plus its index.
    '''
    d = K.dim
    apexes = {s: base + k for k, s in enumerate(K.simplices(d))}
    simplices = [_level(s, shift) for s in K.all_simplices() if len(s) <= d]
    for s, apex in apexes.items():
        top = _level(s, shift)
        for j in range(len(top)):
            simplices.append(tuple(sorted(top[:j] + top[j + 1:] + (apex,))))
    return simplices, apexes


def _cone_maps(apexes, shift):
    def b(s, apex):
        return ChainMap('b', lambda t: cone(Chain.of(t), apex))

    def subdivide(s):
        origin = _level(s, -shift)
        if origin in apexes:
            if len(s) == 1:
                # a point subdivides to its cone point
                return Chain.of((apexes[origin],))
            return cone(Chain.of(s).boundary(), apexes[origin])
        return Chain.of(s)

    return {s: b(s, apex) for s, apex in apexes.items()}, ChainMap('S', subdivide)


def stellar_subdivision(K, check=True):
    '''
    Stellar subdivision of a pure complex: every top simplex sigma becomes the
    cone from a new vertex v_sigma over its boundary, (d+1) n_d top cells in all.

    Maps: ``b`` (dict of cone maps per top simplex) and the subdivision map S.
    '''
    _require_pure(K)
    N = _offset(K)
    simplices, apexes = _stellar(K, 0, N)
    SK = build_complex(simplices)
    b, S = _cone_maps(apexes, 0)
    construction = Construction(K, SK, {'b': b, 'S': S}, N, apexes)
    if check:
        _check(verify_stellar(construction), 'stellar subdivision')
    return construction


def _stellar_prism_map(apexes, N, P):
    def image(s):
        if s not in apexes:
            return P.image(s)
        apex = apexes[s]
        return -cone(Chain.of(s), apex) - cone(P.apply(Chain.of(s).boundary()), apex)
    return ChainMap('SP', image, degree=1)


def stellar_prism(K, check=True):
    '''
    K x [0, 1] with the bottom copy kept and the top copy stellar subdivided.
    Built from the prism over the (d-1)-skeleton and, for each top simplex
    sigma, the cones from v_sigma over the prism pieces of its proper faces
    and over the bottom copy of sigma.

    Maps: I0, I1, P, S (acting on the top copy) and SP, with
    d SP + SP d = S I1 - I0.
    '''
    _require_pure(K)
    d = K.dim
    N = _offset(K)
    apexes = {s: 2 * N + k for k, s in enumerate(K.simplices(d))}
    simplices = [piece for s in K.all_simplices() if len(s) <= d
                 for piece in _prism_pieces(s, N)]
    for s, apex in apexes.items():
        simplices.append(s + (apex,))
        for face in build_complex([s]).all_simplices():
            if face == s:
                continue
            simplices.extend(piece + (apex,) for piece in _prism_pieces(face, N))
    SPK = build_complex(simplices)
    I0, I1 = _inclusions(N)
    P = _prism_map(N)
    b, S = _cone_maps(apexes, N)
    maps = {'I0': I0, 'I1': I1, 'P': P, 'S': S, 'b': b,
            'SP': _stellar_prism_map(apexes, N, P)}
    construction = Construction(K, SPK, maps, N, apexes)
    logger.debug('stellar prism with counts %s', SPK.counts())
    if check:
        _check(verify_stellar_prism(construction), 'stellar prism')
    return construction


def _check(report, what):
    if not report.passed:
        failed = [c.name for c in report.checks if not c.passed]
        raise ConstructionError('{} failed {}'.format(what, failed))


# ---- identities ----

def _boundary(chain):
    if chain.dim < 1:
        return Chain.zero(chain.dim - 1)
    return chain.boundary()


def _cone_identity(report, s, apex, shift=0):
    '''d b(x) = x - b(dx) on the faces of s, and d b(u) = u - apex on vertices.'''
    ok = True
    for face in build_complex([s]).all_simplices():
        x = Chain.of(_level(face, shift))
        lhs = cone(x, apex).boundary()
        if len(face) == 1:
            rhs = x - Chain.of((apex,))
        else:
            rhs = x - cone(x.boundary(), apex)
        ok = ok and lhs == rhs
    report.add('cone {}'.format(list(s)), ok)


def verify_stellar(construction):
    K = construction.source
    S = construction.maps['S']
    report = VerificationReport('stellar subdivision')
    for s, apex in construction.apexes.items():
        _cone_identity(report, s, apex)
    ok = all(_boundary(S(Chain.of(s))) == S(_boundary(Chain.of(s)))
             for s in K.all_simplices() if len(s) > 1)
    report.add('dS = Sd', ok)
    top = construction.complex.n(K.dim)
    report.add('top cells', top == (K.dim + 1) * K.n(K.dim),
               '{} top cells from {}'.format(top, K.n(K.dim)))
    return report


def verify_prism(construction):
    K = construction.source
    m = construction.maps
    report = VerificationReport('prism')
    ok = True
    for s in K.all_simplices():
        x = Chain.of(s)
        lhs = _boundary(m['P'](x)) + m['P'](_boundary(x))
        ok = ok and lhs == m['I1'](x) - m['I0'](x)
    report.add('dP + Pd = I1 - I0', ok)
    return report


def verify_stellar_prism(construction):
    K = construction.source
    m = construction.maps
    N = construction.offset
    report = VerificationReport('stellar prism')
    for s, apex in construction.apexes.items():
        _cone_identity(report, s, apex, shift=N)
    report.extend(verify_prism(construction))
    ok = True
    for s in K.all_simplices():
        x = Chain.of(s)
        lhs = _boundary(m['SP'](x)) + m['SP'](_boundary(x))
        ok = ok and lhs == m['S'](m['I1'](x)) - m['I0'](x)
    report.add('dSP + SPd = S I1 - I0', ok)
    ok = all(_boundary(m['S'](m['I1'](Chain.of(s)))) == m['S'](m['I1'](_boundary(Chain.of(s))))
             for s in K.all_simplices() if len(s) > 1)
    report.add('dS = Sd', ok)
    return report


def verify_chain_maps(K):
    '''
    Build the stellar subdivision, prism and stellar prism of a pure complex
    and check every chain map identity on every simplex.
    '''
    _require_pure(K)
    report = VerificationReport('chain maps')
    report.extend(verify_stellar(stellar_subdivision(K, check=False)))
    report.extend(verify_prism(prism(K)))
    report.extend(verify_stellar_prism(stellar_prism(K, check=False)))
    return report
