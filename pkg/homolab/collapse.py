'''
Elementary collapses: removing a free face together with its only coface,
and carrying a bounding chain along a sequence of them.
'''
import logging
from dataclasses import dataclass, field

from .complex import Chain, SimplicialComplex, facets, simplex
from .errors import DomainError

logger = logging.getLogger(__name__)


@dataclass
class CollapseSequence:
    source: SimplicialComplex
    pairs: list = field(default_factory=list)
    result: SimplicialComplex = None
    target_dim: int = None

    @property
    def reached(self):
        """True when the result has no simplex above ``target_dim``."""
        if self.target_dim is None:
            return True
        return self.result.dim <= self.target_dim

    def to_dict(self):
        return {
            'pairs': [{'sigma': list(s), 'tau': list(t)} for s, t in self.pairs],
            'source_counts': self.source.counts(),
            'result_counts': self.result.counts(),
            'target_dim': self.target_dim,
            'reached': self.reached,
        }


class _Tracker:
    """Alive simplices with their alive immediate cofaces."""

    def __init__(self, K):
        self.alive = set(K.all_simplices())
        self.up = {s: set() for s in self.alive}
        for s in self.alive:
            for f, _ in facets(s):
                self.up[f].add(s)

    def is_free(self, sigma, tau):
        return (sigma in self.alive and tau in self.alive and len(sigma) == len(tau) + 1
                and self.up[tau] == {sigma} and not self.up[sigma])

    def pairs(self, protect=frozenset()):
        out = []
        for tau in self.alive:
            if len(self.up[tau]) == 1 and tau not in protect:
                (sigma,) = self.up[tau]
                if not self.up[sigma] and sigma not in protect:
                    out.append((sigma, tau))
        return out

    def remove(self, sigma, tau):
        for s in (sigma, tau):
            self.alive.discard(s)
            for f, _ in facets(s):
                self.up[f].discard(s)

    def complex(self, K):
        weights = {s: w for s, w in K.weight_map().items() if s in self.alive}
        return SimplicialComplex(self.alive, weights)


def _by_face(pair):
    sigma, tau = pair
    return tau, sigma


def find_collapse_pairs(K):
    '''
    Every (sigma, tau) with tau a free face: its only immediate coface is
    sigma and sigma is maximal. Sorted by tau, then sigma.
    '''
    return sorted(_Tracker(K).pairs(), key=_by_face)


def greedy_collapse(K, target_dim=None, protect=()):
    '''
    Repeatedly collapse the smallest free pair among those whose sigma has the
    largest dimension, until no pair with dim sigma above ``target_dim`` is
    left. Simplices in ``protect`` are never removed. Not reaching the target
    is a result, not an error.
    '''
    tracker = _Tracker(K)
    protect = frozenset(tuple(s) for s in protect)
    pairs = []
    while True:
        available = [p for p in tracker.pairs(protect)
                     if target_dim is None or len(p[0]) - 1 > target_dim]
        if not available:
            break
        top = max(len(p[0]) for p in available)
        pair = min((p for p in available if len(p[0]) == top), key=_by_face)
        tracker.remove(*pair)
        pairs.append(pair)
    sequence = apply_collapses(K, pairs)
    sequence.target_dim = target_dim
    logger.info('collapsed %d pairs: %s -> %s%s', len(pairs), K.counts(),
                sequence.result.counts(), '' if sequence.reached else ' (target not reached)')
    return sequence


def apply_collapses(K, pairs):
    '''
    Replay a prescribed sequence, checking that each pair is free when it is
    collapsed.
    '''
    tracker = _Tracker(K)
    checked = []
    for i, (sigma, tau) in enumerate(pairs):
        sigma, tau = simplex(sigma), simplex(tau)
        if not tracker.is_free(sigma, tau):
            raise DomainError('pair {} ({}, {}) is not a free pair at its step'.format(
                i, list(sigma), list(tau)))
        tracker.remove(sigma, tau)
        checked.append((sigma, tau))
    return CollapseSequence(K, checked, tracker.complex(K))


def transport_chain(sequence, f, gamma):
    '''
    Push a chain f with boundary gamma through the collapses onto the final
    complex, keeping its boundary. When tau is a d-simplex the coefficient on
    tau is cancelled with a multiple of the boundary of sigma; when sigma is a
    d-simplex its coefficient is already zero.
    '''
    if f.boundary() != gamma:
        raise DomainError('the chain does not have boundary gamma')
    L = sequence.result
    outside = [s for s in gamma.support() if s not in L]
    if outside:
        raise DomainError('gamma is supported on {} outside the collapsed complex'.format(
            list(outside[0])))
    d = f.dim
    for sigma, tau in sequence.pairs:
        if len(tau) == d + 1 and f[tau] != 0:
            sign = dict(facets(sigma))[tau]
            f = f - Chain.of(sigma).boundary() * (sign * f[tau])
        elif len(sigma) == d + 1 and f[sigma] != 0:
            raise DomainError('free d-simplex {} carries {}'.format(list(sigma), f[sigma]))
    return f
