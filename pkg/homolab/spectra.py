'''
Laplacian variants of a simplicial complex, their spectra, Hodge Betti
numbers and checks of the standard spectral identities.
'''
import logging
from dataclasses import dataclass, field

import networkx as nx
import numpy as np
import scipy.linalg as la

from . import settings
from .complex import SimplicialComplex, boundary_matrix
from .errors import DomainError, NumericError, ResourceError

logger = logging.getLogger(__name__)

KINDS = ('up', 'down', 'combinatorial', 'weighted-up', 'normalized-up')


@dataclass
class LaplacianMatrix:
    kind: str
    dim: int
    matrix: np.ndarray
    basis: tuple
    degrees: np.ndarray = None
    excluded: tuple = ()

    @property
    def size(self):
        return self.matrix.shape[0]


@dataclass
class SpectralReport:
    eigenvalues: np.ndarray
    threshold: float
    gap: float = None
    lambda_max: float = 0.0
    harmonic_dimension: int = 0
    betti: int = None
    near_threshold: bool = False
    eigenvectors: np.ndarray = field(default=None, repr=False)

    @property
    def nonzero(self):
        return self.eigenvalues[self.eigenvalues > self.threshold]

    def to_dict(self):
        return {
            'eigenvalues': [float(v) for v in self.eigenvalues],
            'threshold': self.threshold,
            'gap': self.gap,
            'lambda_max': self.lambda_max,
            'harmonic_dimension': self.harmonic_dimension,
            'betti': self.betti,
            'near_threshold': self.near_threshold,
        }


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ''
    skipped: bool = False


@dataclass
class VerificationReport:
    subject: str
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed or c.skipped for c in self.checks)

    def add(self, name, passed, detail='', skipped=False):
        self.checks.append(Check(name, bool(passed), detail, skipped))
        if not passed and not skipped:
            logger.warning('%s: check %s failed (%s)', self.subject, name, detail)

    def extend(self, other):
        for c in other.checks:
            self.checks.append(Check('{}/{}'.format(other.subject, c.name),
                                     c.passed, c.detail, c.skipped))

    def to_dict(self):
        return {
            'subject': self.subject,
            'passed': self.passed,
            'checks': [{'name': c.name, 'passed': c.passed,
                        'skipped': c.skipped, 'detail': c.detail}
                       for c in self.checks],
        }


def _dense(K, d):
    if d < 1 or K.n(d) == 0:
        return np.zeros((K.n(d - 1) if d >= 1 else 0, K.n(d)))
    return boundary_matrix(K, d).dense().astype(float)


def _weights(K, d):
    return np.array([float(w) for w in K.weights(d)])


def laplacian(K, d, kind='combinatorial', exclude_zero_degree=False):
    if kind not in KINDS:
        raise DomainError('unknown Laplacian kind {!r}'.format(kind))
    if d < 0:
        raise DomainError('Laplacian dimension must be non-negative, got {}'.format(d))
    if kind == 'down' and d < 1:
        raise DomainError('down Laplacian needs d >= 1')
    n = K.n(d)
    if n > settings.eigen_cap:
        raise ResourceError('{} {}-simplices exceed the Laplacian cap {}'.format(
            n, d, settings.eigen_cap))
    basis = K.simplices(d)
    up_b = _dense(K, d + 1)

    if kind == 'up':
        return LaplacianMatrix(kind, d, up_b @ up_b.T, basis)
    if kind == 'weighted-up':
        w = _weights(K, d + 1)
        return LaplacianMatrix(kind, d, (up_b * w) @ up_b.T, basis)
    if kind == 'down':
        down_b = _dense(K, d)
        return LaplacianMatrix(kind, d, down_b.T @ down_b, basis)
    if kind == 'combinatorial':
        matrix = up_b @ up_b.T
        if d >= 1:
            down_b = _dense(K, d)
            matrix = matrix + down_b.T @ down_b
        return LaplacianMatrix(kind, d, matrix, basis)

    # normalized-up: D^{-1/2} B W B^T D^{-1/2}
    w = _weights(K, d + 1)
    degrees = np.abs(up_b) @ w if up_b.size else np.zeros(n)
    zero = [basis[i] for i in np.flatnonzero(degrees == 0)]
    if zero and not exclude_zero_degree:
        raise DomainError('{} {}-simplices have zero degree, first {}'.format(
            len(zero), d, list(zero[0])))
    keep = np.flatnonzero(degrees > 0)
    scale = 1.0 / np.sqrt(degrees[keep])
    weighted = (up_b * w) @ up_b.T
    matrix = weighted[np.ix_(keep, keep)] * scale[:, None] * scale[None, :]
    return LaplacianMatrix(kind, d, matrix, tuple(basis[i] for i in keep),
                           degrees=degrees[keep], excluded=tuple(zero))


def spectrum(M, zero_tol=None, vectors=False):
    zero_tol = settings.zero_tol if zero_tol is None else zero_tol
    matrix = M.matrix if isinstance(M, LaplacianMatrix) else np.asarray(M, dtype=float)
    if matrix.shape[0] == 0:
        return SpectralReport(np.zeros(0), zero_tol, betti=0 if _is_comb(M) else None)
    if not np.all(np.isfinite(matrix)):
        raise NumericError('matrix has non-finite entries')
    try:
        if vectors:
            values, vecs = la.eigh(matrix)
        else:
            values, vecs = la.eigh(matrix, eigvals_only=True), None
    except la.LinAlgError as e:
        raise NumericError('eigensolver did not converge on a {}x{} matrix: {}'.format(
            matrix.shape[0], matrix.shape[1], e)) from e
    lambda_max = float(values[-1])
    threshold = zero_tol * max(1.0, lambda_max)
    nonzero = values[values > threshold]
    harmonic = int(np.sum(values <= threshold))
    near = bool(np.any((np.abs(values) > threshold * 1e-2) & (np.abs(values) < threshold * 1e2)))
    return SpectralReport(
        eigenvalues=values, threshold=threshold,
        gap=float(nonzero[0]) if nonzero.size else None,
        lambda_max=lambda_max, harmonic_dimension=harmonic,
        betti=harmonic if _is_comb(M) else None,
        near_threshold=near, eigenvectors=vecs)


def _is_comb(M):
    return isinstance(M, LaplacianMatrix) and M.kind == 'combinatorial'


def betti_via_hodge(K, d, zero_tol=None):
    """beta_d as the dimension of the harmonic space of L_d."""
    if d > K.dim:
        return 0
    report = spectrum(laplacian(K, d, 'combinatorial'), zero_tol)
    if report.near_threshold:
        logger.warning('spectrum of L_%d has eigenvalues close to the threshold %.3g',
                       d, report.threshold)
    return report.betti


def components(K):
    '''
    Connected components of ``K`` as subcomplexes, in order of smallest vertex.
    '''
    graph = nx.Graph()
    graph.add_nodes_from(K.vertices())
    graph.add_edges_from(K.simplices(1))
    parts = sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda c: c[0])
    out = []
    for part in parts:
        part = set(part)
        kept = [s for s in K.all_simplices() if s[0] in part]
        out.append(SimplicialComplex(kept, {s: w for s, w in K.weight_map().items()
                                            if s[0] in part}))
    return out


def _multiset_equal(a, b, tol):
    a, b = np.sort(np.asarray(a, dtype=float)), np.sort(np.asarray(b, dtype=float))
    if a.shape != b.shape:
        return False
    scale = max([1.0] + [float(np.abs(v).max()) for v in (a, b) if v.size])
    return bool(np.all(np.abs(a - b) <= tol * scale))


def verify_spectrum_identities(K, d, tol=1e-8):
    report = VerificationReport('spectrum identities d={}'.format(d))
    up = spectrum(laplacian(K, d, 'up'))
    comb = spectrum(laplacian(K, d, 'combinatorial'))

    # (i) nonzero spectra of L_d^up and L_{d+1}^down agree
    if K.n(d + 1):
        down_next = spectrum(laplacian(K, d + 1, 'down'))
        report.add('up-down', _multiset_equal(up.nonzero, down_next.nonzero, tol),
                   '{} vs {} nonzero eigenvalues'.format(up.nonzero.size, down_next.nonzero.size))
    else:
        report.add('up-down', up.nonzero.size == 0, 'no {}-simplices'.format(d + 1))

    # (ii) spectrum of a disjoint union is the union of spectra
    parts = components(K)
    merged = np.concatenate([spectrum(laplacian(P, d, 'combinatorial')).eigenvalues
                             for P in parts]) if parts else np.zeros(0)
    report.add('disjoint-union', _multiset_equal(comb.eigenvalues, merged, tol),
               '{} components'.format(len(parts)))

    # (iii) gap of L_d is the smaller of the up and down gaps
    gaps = [g for g in (up.gap, spectrum(laplacian(K, d, 'down')).gap if d >= 1 else None)
            if g is not None]
    expected = min(gaps) if gaps else None
    if expected is None or comb.gap is None:
        report.add('gap-min', expected is None and comb.gap is None,
                   'gaps {} and {}'.format(comb.gap, expected))
    else:
        report.add('gap-min', abs(comb.gap - expected) <= tol * max(1.0, expected),
                   '{:.12g} vs {:.12g}'.format(comb.gap, expected))

    # (iv) normalized gap sandwich, needs every degree positive
    if K.n(d + 1) == 0 or up.gap is None:
        report.add('sandwich', True, 'no up Laplacian', skipped=True)
    else:
        norm = laplacian(K, d, 'normalized-up', exclude_zero_degree=True)
        if norm.excluded:
            report.add('sandwich', True, '{} zero-degree simplices'.format(len(norm.excluded)),
                       skipped=True)
        else:
            weighted = spectrum(laplacian(K, d, 'weighted-up')).gap
            normalized_report = spectrum(norm)
            normalized = normalized_report.gap
            d_min, d_max = float(norm.degrees.min()), float(norm.degrees.max())
            slack = tol * max(1.0, weighted)
            report.add('sandwich',
                       weighted / d_max - slack <= normalized <= weighted / d_min + slack,
                       '{:.6g} <= {:.6g} <= {:.6g}'.format(weighted / d_max, normalized,
                                                           weighted / d_min))
            report.add('normalized-bound', normalized_report.lambda_max <= d + 2 + tol,
                       'lambda_max {:.6g}'.format(normalized_report.lambda_max))

    # lambda_max(L_d) <= n_0 and positive semidefiniteness
    report.add('lambda-max', comb.lambda_max <= K.n(0) + tol,
               '{:.6g} vs n_0={}'.format(comb.lambda_max, K.n(0)))
    report.add('psd', comb.eigenvalues.size == 0 or
               comb.eigenvalues[0] >= -1e-9 * max(1.0, comb.lambda_max))
    return report


def eigen_residual(M, report):
    """Largest ||Mv - lambda v|| over reported pairs, relative to ||M||."""
    matrix = M.matrix
    if report.eigenvectors is None or matrix.size == 0:
        return 0.0
    residual = matrix @ report.eigenvectors - report.eigenvectors * report.eigenvalues
    return float(np.max(np.linalg.norm(residual, axis=0)) / max(1.0, la.norm(matrix, 2)))
